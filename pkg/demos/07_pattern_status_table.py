"""Regenerate docs/pattern-status.md: the semantic status of each of the
fourteen anti-pattern fixtures, as decided by the tableau and confirmed by
the exhaustive finite-model oracle."""

from pathlib import Path

from owlforge.antipattern import FAMILY_OF, AntiPatternId, minimal_fixture, template
from owlforge.finitemodel import oracle_classify_status
from owlforge.model import Incoherent, status_tag
from owlforge.tableau import classify_status

HEADER = """\
# Anti-pattern semantics

Status of each minimal pattern fixture, as decided by the tableau checker
and confirmed by exhaustive finite-model search over domains of size 1-3.
"Consistent" rows are structurally labeled positives in the dataset even
though no logical contradiction follows from the pattern alone; the
UEWI_1 row follows the catalogue as printed, whose instance is satisfiable.

Regenerate with `python demos/07_pattern_status_table.py`.

| Pattern | Family | Axioms | Tableau | Oracle (domain <= 3) | Unsatisfiable classes |
|---------|--------|-------:|---------|----------------------|-----------------------|
"""


def build_table() -> str:
    rows = []
    for pattern in AntiPatternId:
        fixture = minimal_fixture(pattern)
        tab = classify_status(fixture)
        orc = oracle_classify_status(fixture, max_domain=3)
        unsat = (
            ", ".join(c.local for c in tab.unsatisfiable)
            if isinstance(tab, Incoherent)
            else "-"
        )
        rows.append(
            f"| {pattern.value} | {FAMILY_OF[pattern]} | {template(pattern).arity} "
            f"| {status_tag(tab)} | {status_tag(orc)} | {unsat} |"
        )
    return HEADER + "\n".join(rows) + "\n"


if __name__ == "__main__":
    out = Path(__file__).resolve().parents[1] / "docs" / "pattern-status.md"
    out.parent.mkdir(exist_ok=True)
    out.write_text(build_table())
    print(f"wrote {out}")
    print(build_table())
