# The V_alpha construction next to the pivot route, plus the 1-D Haar case.
from prewavelets.boxspline import DirectionMatrix, get_preset
from prewavelets.prewavelet import (
    construct_family, valpha_pathway, verify_basis, verify_orthogonality,
)

xi = get_preset("courant2d").matrix
va = valpha_pathway(xi)
print("alpha =", va.alpha, "after", va.attempts, "attempt(s)")
print("d0:", va.d0_certificate.summary())
print("orthogonal:", verify_orthogonality(va).ok)
print("basis:", verify_basis(va).certificate.summary())
print("N via V_alpha =", va.N, " N via pivot =", construct_family("courant2d").N)

# a single direction in 1-D: Phi = 1 and the mask is the Haar filter
haar = construct_family(DirectionMatrix(((1,),)))
print("\nHaar: Phi =", haar.Phi, " masks =", {s: str(m) for s, m in haar.masks.items()})
