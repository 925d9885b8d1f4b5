"""Build a coarse fiber functor on Z/2 from its two simple objects."""

from tannaka.bialgebroid import build_bialgebroid
from tannaka.fiber import CheckConfig, check_coarse, validate_fiber_functor
from tannaka.fixtures import cyclic
from tannaka.fusion import build_coarse_fiber, fusion_system_from_index, validate_coarse_construction

c, _ = cyclic(2)
fs = fusion_system_from_index(c, ["1", "s"])
f = build_coarse_fiber(c, fs, "coarse")
print("base algebra R has dim", f.base.dim)
for x in c.objects:
    labels, _ = f.fusion_layout[x]
    print("F(%s) has basis" % x, labels)
print(validate_coarse_construction(f, fs).to_text())
print(validate_fiber_functor(f, CheckConfig()).to_text())
print(check_coarse(f, CheckConfig()).to_text())
# over R = Q x Q the coend is End(F1) + End(Fs)
print("dim H =", build_bialgebroid(f).dim)
