"""Parse Manchester-syntax modules and check them with the tableau reasoner.

Walks through the three semantic outcomes on small inputs: a consistent and
coherent ontology, an incoherent one (an unsatisfiable class but no data
contradiction), and an inconsistent one (an actual clash involving
individuals).
"""

from owlforge.antipattern import AntiPatternId, minimal_fixture
from owlforge.finitemodel import FiniteModel
from owlforge.manchester import parse, serialize
from owlforge.model import Incoherent, Inconsistent, status_tag
from owlforge.tableau import check_consistency, classify_status

UNIVERSITY = """\
Prefix: : <http://example.org/ontology#>

Class: Professor
    DisjointWith: Student

Class: Student
Class: Course

ObjectProperty: teaches
    Domain: Professor
    Range: Course

Individual: drSmith
    Types: Professor
    Facts: teaches aiCourse

Individual: aiCourse
    Types: Course
"""

print("== a consistent, coherent module ==")
university = parse(UNIVERSITY, ontology_id="university")
print(f"parsed {len(university.axioms)} axioms; status:", status_tag(classify_status(university)))
verdict = check_consistency(university)
if isinstance(verdict.witness, FiniteModel):
    print(f"witness: a finite model with {verdict.witness.domain_size} elements")

print("\n== an incoherent module (OnlynessIsLoneliness + an existential) ==")
ue = minimal_fixture(AntiPatternId.UE)
print(serialize(ue))
status = classify_status(ue)
assert isinstance(status, Incoherent)
print("status:", status_tag(status), "| unsatisfiable:", [c.local for c in status.unsatisfiable])

print("\n== an inconsistent module (an individual outside the property domain) ==")
ood = minimal_fixture(AntiPatternId.OOD)
status = classify_status(ood)
assert isinstance(status, Inconsistent)
print("status:", status_tag(status))
print("clash:", status.clash)
trace = check_consistency(ood).witness
print("last rule applications leading to the clash:")
for entry in trace[-4:]:
    print(f"  {entry.rule:8s} node={entry.node} {entry.detail}")
