from hypothesis import strategies as st

from psystem.syntax import Apply, ForAll, Not, Or, Term, VarSym, X1, X2, X3, x1, x2, x3

type1 = st.sampled_from([x1, x2, x3, VarSym(4, 1)])
type2 = st.sampled_from([X1, X2, X3])

terms = st.builds(Term, st.integers(0, 40), st.none() | type1)
closed_terms = st.builds(Term, st.integers(0, 40))
higher_atoms = st.builds(Apply, st.just(VarSym(1, 3)), type2)
atoms = st.builds(Apply, type2, terms) | higher_atoms

formulas = st.recursive(
    atoms,
    lambda sub: st.builds(Not, sub)
    | st.builds(Or, sub, sub)
    | st.builds(ForAll, type1 | type2, sub),
    max_leaves=6,
)


# acceptance criteria register their outcome here; printed at the end of the run
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, note) in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{note}]" if note else ""))
