"""The acceptance gate: one test per criterion, each printing its own
pass/fail line.  Tolerances are exact equalities and 100%-agreement counts
as implemented in annotmc.acceptance."""

from annotmc import acceptance

_BY_NAME = dict(acceptance.CRITERIA)


def _run(name):
    ok, detail = _BY_NAME[name]()
    print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    assert ok, detail


def test_criterion_01_clique_ttw():
    _run("clique-ttw")


def test_criterion_02_star_worked_example():
    _run("star-worked-example")


def test_criterion_03_parameter_inequalities():
    _run("parameter-inequalities")


def test_criterion_04_minor_monotonicity():
    _run("minor-monotonicity")


def test_criterion_05_grid_values():
    _run("grid-values")


def test_criterion_06_even_cycle_separation():
    _run("even-cycle-separation")


def test_criterion_07_containment_formula_oracle():
    _run("containment-formula-oracle")


def test_criterion_08_reduction_pipeline():
    _run("reduction-pipeline")


def test_criterion_09_collapse_suite():
    _run("collapse-suite")


def test_criterion_10_prenex_and_naive_oracle():
    _run("prenex-and-naive-oracle")


def test_criterion_11_composition_lab():
    _run("composition-lab")


def test_criterion_12_mini_dp_oracle():
    _run("mini-dp-oracle")


def test_criterion_13_expressiveness_demos():
    _run("expressiveness-demos")
