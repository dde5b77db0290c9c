# Box spline masks, the autocorrelation symbol Phi and a numeric cross-check.
from prewavelets.boxspline import (
    PRESETS, autocorrelation_phi, center_shift, mask_H, numeric_box_spline_eval,
)
from prewavelets.laurent import bracket_product, substitute_squares

for name, preset in PRESETS.items():
    xi = preset.matrix
    H = mask_H(xi)
    Phi = autocorrelation_phi(xi)
    print(f"{name}: {xi.d}-D, {len(xi.columns)} directions")
    print(f"  H has {len(H)} terms, Phi has {len(Phi)} terms, Phi(1) = {Phi.value_at_one()}")

    # <H, H>_Phi = Phi(z^2) is the refinement identity for the symbol
    assert bracket_product(H, H, Phi) == substitute_squares(Phi)

    # the coefficients of Phi are values of the doubled box spline at shifted integers
    c = center_shift(xi)
    worst = 0.0
    for k, v in Phi.items():
        pt = [a + b + 1e-9 * (i + 1) * 0.7071 for i, (a, b) in enumerate(zip(k, c))]
        worst = max(worst, abs(numeric_box_spline_eval(xi.doubled(), pt) - float(v)))
    print(f"  max deviation of the recurrence from exact Phi: {worst:.2e}")

print("\nCourant Phi:", autocorrelation_phi(PRESETS["courant2d"].matrix))
