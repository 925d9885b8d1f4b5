"""Reconstruct the dual group algebra of Z/3 from its character category and look at it."""

from tannaka.bialgebroid import build_bialgebroid, validate_right_bialgebroid
from tannaka.fixtures import cyclic
from tannaka.hopf_galois import build_antipode, galois_beta, validate_antipode

c, f = cyclic(3)
h = build_bialgebroid(f)
print("objects:", c.objects, " dim H =", h.dim)
print(validate_right_bialgebroid(h).to_text())

names = [tag[0] for tag in h.carrier.basis_tags]
for i, a in enumerate(names):
    row = []
    for j, b in enumerate(names):
        prod = h.mul(h.basis(i), h.basis(j))
        row.append(names[[k for k in range(h.dim) if prod.data[k][0]][0]])
    print("e_%-2s *" % a, " ".join("e_%-2s" % x for x in row))

s = build_antipode(f, h)
print("antipode:", s.S.to_strings())
print(validate_antipode(h, s).to_text())
beta, ok = galois_beta(h)
print("Galois map %dx%d invertible: %s" % (beta.rows, beta.cols, ok))
