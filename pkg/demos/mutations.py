"""Every validator rejects a perturbed input and says where."""

from tannaka.bialgebroid import validate_right_bialgebroid
from tannaka.fixtures import (broken_interchange_z2, dual_numbers_category, mutated_antipodes,
                              mutated_group_bialgebras, nonzero_covering)
from tannaka.hopf_galois import validate_antipode
from tannaka.moncat import validate_category
from tannaka.report import serialize_witness
from tannaka.site import validate_topology_axioms


def show(label, rep):
    print("%s:" % label)
    for e in rep.failures:
        print("  %s  [%s]  witness=%s" % (e.name, e.anchor, serialize_witness(e.witness)))


show("broken interchange", validate_category(broken_interchange_z2()[0]))
for name, h in mutated_group_bialgebras().items():
    show("bialgebra " + name, validate_right_bialgebroid(h))
h, wrong = mutated_antipodes()
for name, s in wrong.items():
    show("antipode " + name, validate_antipode(h, s))
c = dual_numbers_category()
show("nonzero sieves cover", validate_topology_axioms(c, 2, covering=nonzero_covering(c)))
