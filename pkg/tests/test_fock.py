import pytest

from jetcohom.fock import (
    VACUUM,
    EnergyWindow,
    GuardViolation,
    OrthonormalBackend,
    SemiInfMonomial,
    WindowViolation,
    apply_d,
    apply_d_twisted,
    apply_eps,
    apply_iota,
    apply_L,
    clifford_check,
    cocycle_check,
    commutator_check,
    d_matches_cochain_check,
    d_squared_check,
    dtilde_adjoint_matrix_check,
    energy_bookkeeping_check,
    l0_commutes_with_d_check,
    laplacian_formula_check,
    leibniz_check,
    monomials_in_support,
    vacuum,
    vacuum_checks,
    verify_identity_suite,
    _L_monomial,
    _apply_monowise,
    _closed_form_monomial,
)

TOL = 1e-9
WINDOW = EnergyWindow(-2, 3, 1)


@pytest.fixture(scope="module")
def backend(a1):
    return OrthonormalBackend(a1)


@pytest.fixture(scope="module")
def backend2(a2):
    return OrthonormalBackend(a2)


def test_window_validation():
    with pytest.raises(ValueError):
        EnergyWindow(1, 3, 0)
    with pytest.raises(ValueError):
        EnergyWindow(-1, 0, 0)


def test_vacuum_shape(backend):
    v = vacuum(WINDOW)
    assert list(v) == [VACUUM]
    assert VACUUM.energy == 0 and VACUUM.degree_offset == 0


def test_vacuum_annihilation(backend):
    verdict = vacuum_checks(backend, WINDOW, TOL)
    assert verdict.passed and verdict.max_abs_error <= TOL


def test_eps_iota_basics(backend):
    v = vacuum(WINDOW)
    up = apply_eps(backend, (0, 1), v, WINDOW)
    [(mono, coeff)] = up.items()
    assert mono.energy == 1 and mono.degree_offset == 1 and coeff == 1
    # iota on a monomial not containing the dual mode vanishes
    assert apply_iota(backend, (1, 2), up, WINDOW) == {}
    # eps twice with the same mode vanishes
    assert apply_eps(backend, (0, 1), up, WINDOW) == {}
    # round trip returns the vacuum
    back = apply_iota(backend, (0, 1), up, WINDOW)
    assert back == {VACUUM: 1 + 0j}


def test_window_violation_raised(backend):
    with pytest.raises(WindowViolation):
        apply_eps(backend, (0, 4), vacuum(WINDOW), WINDOW)
    with pytest.raises(WindowViolation):
        apply_iota(backend, (0, -3), vacuum(WINDOW), WINDOW)


def test_guard_violation_raised(backend):
    edge = {SemiInfMonomial(((0, 3),), ()): 1.0 + 0j}  # supported at kMax
    with pytest.raises(GuardViolation):
        apply_L(backend, 0, 1, edge, WINDOW)
    # vacuum is guarded for any shift
    assert apply_L(backend, 0, 1, vacuum(WINDOW), WINDOW) == {}


def test_clifford_relations(backend):
    verdict = clifford_check(backend, WINDOW, TOL)
    assert verdict.passed and verdict.max_abs_error <= TOL


def test_mode_action_commutators(backend):
    verdict = commutator_check(backend, WINDOW, TOL)
    assert verdict.passed and verdict.max_abs_error <= TOL


def test_cocycle_values(backend):
    measured, verdict = cocycle_check(backend, 0, 0, 1, WINDOW, TOL)
    assert verdict.passed
    assert abs(measured - 4.0) <= TOL  # 2c*k with c = 2, k = 1

    measured0, verdict0 = cocycle_check(backend, 0, 0, 0, WINDOW, TOL)
    assert verdict0.passed and abs(measured0) <= TOL

    measured_perp, verdict_perp = cocycle_check(backend, 0, 1, 1, WINDOW, TOL)
    assert verdict_perp.passed and abs(measured_perp) <= TOL


def test_cocycle_skip_when_guard_too_small(backend):
    w0 = EnergyWindow(-2, 3, 0)
    _, verdict = cocycle_check(backend, 0, 0, 1, w0, TOL)
    assert verdict.skipped and "guard" in verdict.reason


def test_L_annihilates_vacuum_for_positive_shift(backend):
    for k in (1, 2):
        for i in range(backend.n):
            out = _apply_monowise(lambda m: _L_monomial(backend, i, k, m, WINDOW), vacuum(WINDOW))
            assert out == {}


def test_energy_bookkeeping(backend):
    verdict = energy_bookkeeping_check(backend, WINDOW, TOL)
    assert verdict.passed


def test_L0_commutes_with_d(backend):
    verdict = l0_commutes_with_d_check(backend, WINDOW, TOL)
    assert verdict.passed and verdict.max_abs_error <= TOL


def test_leibniz(backend):
    verdict = leibniz_check(backend, WINDOW, TOL)
    assert verdict.passed and verdict.max_abs_error <= TOL


def test_d_matches_cochain_differential(backend):
    verdict = d_matches_cochain_check(backend, WINDOW, TOL)
    assert verdict.passed and verdict.max_abs_error <= TOL
    assert verdict.vectors > 0


def test_d_squared_formula(backend):
    verdict = d_squared_check(backend, WINDOW, TOL)
    assert verdict.passed and verdict.max_abs_error <= TOL


def test_d_squared_vanishes_on_cochain_sector(backend):
    # all modes k >= 1: the right-hand side needs a hole to fill
    for wedge in (((0, 1),), ((0, 1), (1, 2))):
        mono = SemiInfMonomial(tuple(sorted(wedge, key=lambda m: (m[1], m[0]))), ())
        vv = {mono: 1.0 + 0j}
        dd = apply_d(backend, apply_d(backend, vv, WINDOW), WINDOW)
        assert all(abs(c) <= TOL for c in dd.values())


def test_laplacian_closed_form(backend):
    verdict = laplacian_formula_check(backend, WINDOW, TOL)
    assert verdict.passed and verdict.max_abs_error <= TOL


def test_dtilde_adjoint_is_matrix_transpose(backend):
    verdict = dtilde_adjoint_matrix_check(backend, WINDOW, TOL)
    assert verdict.passed and verdict.max_abs_error <= TOL


def test_closed_form_scalar_on_embedded_cochains(backend, a1):
    """On e^{l,k} ^ Omega the closed form acts by the twisted-Laplacian
    scalar of Theorem-form: casimir - c*k (the PSD pipeline value negated
    for k >= 2, zero at k = 1)."""
    from jetcohom.cochain import eigenvalue_of
    from fractions import Fraction as F

    for k, expected in ((1, 0.0), (2, float(eigenvalue_of(a1, (F(-1),), 2)))):
        for l in range(backend.n):
            v = {SemiInfMonomial(((l, k),), ()): 1.0 + 0j}
            out = _apply_monowise(lambda m: _closed_form_monomial(backend, m, WINDOW), v)
            want = {m: expected * c for m, c in v.items() if expected != 0.0}
            keys = set(out) | set(want)
            err = max((abs(out.get(m, 0j) - want.get(m, 0j)) for m in keys), default=0.0)
            assert err <= TOL


def test_guard_zero_emits_skips(a1):
    suite = verify_identity_suite(a1, EnergyWindow(-2, 3, 0), TOL)
    by_name = {v.identity: v for v in suite}
    assert by_name["d_squared_closed_form"].skipped
    assert by_name["laplacian_closed_form"].skipped
    assert by_name["cocycle_L(0,1)_L(0,-1)"].skipped
    # shift-free identities still run at guard 0
    assert by_name["clifford_relations"].passed
    assert by_name["vacuum_annihilation"].passed
    for v in suite:
        if v.skipped:
            assert v.reason


def test_full_suite_passes_on_acceptance_window(a1):
    suite = verify_identity_suite(a1, WINDOW, TOL)
    for v in suite:
        assert not v.skipped, v.identity
        assert v.passed, (v.identity, v.max_abs_error)


def test_backend_on_a2(backend2):
    # the orthonormalization and the paper normalizations hold beyond rank 1
    w = EnergyWindow(-1, 2, 0)
    measured, verdict = cocycle_check(backend2, 0, 0, 1, EnergyWindow(-2, 3, 1), TOL, max_energy=2)
    assert verdict.passed and abs(measured - 6.0) <= TOL  # 2c*k = 6 for A2


def test_monomial_enumeration_counts(backend):
    mons = monomials_in_support(backend, WINDOW, 1)
    # six addable modes and six removable slots inside the guarded band
    assert len(mons) == 2 ** 6 * 2 ** 6
    capped = monomials_in_support(backend, WINDOW, 1, max_energy=2)
    assert all(m.energy <= 2 for m in capped)
    assert len({m for m in capped}) == len(capped)
