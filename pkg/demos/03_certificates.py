# Certifying that a Laurent polynomial has no zeros on the torus.
import numpy as np

from prewavelets.certify import (
    InconclusiveCertificate, certify_invertible, check_certificate, sample_quantity,
)
from prewavelets.laurent import LaurentPoly
from prewavelets.prewavelet import construct_family

x, y = LaurentPoly.variables(2)

# a dominant constant term gives an immediate bound
P = 10 + x + y ** -1 + 2 * x * y
cert = certify_invertible(P)
print(cert.summary())

# the cubic pivot needs the grid + Lipschitz scan
fam = construct_family("cubic_c1_2d")
u00 = fam.W()[(0, 0)].conjugate()
cert = certify_invertible(u00)
print(cert.summary())
print("replayed:", check_certificate(cert, u00))

# random samples never undercut the bound
th = np.random.default_rng(0).uniform(0, 2 * np.pi, size=(20000, 2))
print("sampled minimum:", sample_quantity(u00, th).min(), ">=", float(cert.lower_bound))

# 1 - x vanishes at x = 1 so no certificate exists
try:
    certify_invertible(1 - x)
except InconclusiveCertificate as exc:
    print("inconclusive as expected:", exc)
