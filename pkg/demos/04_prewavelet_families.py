# Building prewavelet masks for every preset and checking them.
from prewavelets.prewavelet import (
    construct_family, support_stats, symmetry_orbits, verify_orthogonality,
)
from prewavelets.render import mask_name, render_matrix

for name in ("courant2d", "cubic_c1_2d", "quartic_c2_2d", "linear3d"):
    fam = construct_family(name)
    sizes, N = support_stats(fam)
    print(f"\n{name}: c = {fam.c}, pivot {fam.s0}, N = {N}")
    print("  pivot:", fam.pivot_certificate.summary())
    print("  basis:", fam.basis_certificate.summary())
    print("  orthogonal:", verify_orthogonality(fam).ok)
    orbits = symmetry_orbits(fam)
    if orbits is not None:
        print("  orbits:", [[mask_name(s) for s in o] for o in orbits.orbits])

# the Courant masks as coefficient matrices, origin in brackets
fam = construct_family("courant2d")
for s, m in fam.masks.items():
    print(f"\n{mask_name(s)}:")
    print(render_matrix(m), end="")
