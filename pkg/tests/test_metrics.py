import numpy as np
import pytest

from noetherlab.chan import (
    QuantumChannel,
    depolarizing_channel,
    identity_channel,
    random_channel,
    unitary_channel,
)
from noetherlab.metrics import (
    DeviationReport,
    GeneratorSet,
    deviation_avg,
    deviation_su2_closed,
    purity_condition_holds,
    su2_generators,
    u1_generators,
    unitarity_complementary,
    unitarity_jamiolkowski,
    unitarity_su2_closed,
)
from noetherlab.numkit import haar_unitary, mat_exp_skew_hermitian
from noetherlab.su2cov import CovariantMixture, coupled_labels, covariant_channel, extremal_channel
from noetherlab.su2rep import SpinJ
from noetherlab.u1cov import EnergySpectrum, build_extremal


class TestUnitarity:
    def test_identity(self):
        assert abs(unitarity_jamiolkowski(identity_channel(2)) - 1.0) < 1e-12
        assert abs(unitarity_complementary(identity_channel(2)) - 1.0) < 1e-12

    def test_depolarizing(self):
        assert abs(unitarity_jamiolkowski(depolarizing_channel(2))) < 1e-12

    def test_extremal_qubit(self):
        e = extremal_channel(SpinJ(1), SpinJ(1), 2)
        assert abs(unitarity_jamiolkowski(e) - 1 / 9) < 1e-12

    def test_dual_route_agreement(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            d_in = int(rng.integers(2, 5))
            d_out = int(rng.integers(2, 5))
            rank = int(rng.integers(1, 4))
            if d_out * rank < d_in:
                rank = -(-d_in // d_out)
            e = random_channel(d_in, d_out, rank, rng)
            gap = abs(unitarity_jamiolkowski(e) - unitarity_complementary(e))
            assert gap < 1e-10

    def test_isometry_criterion(self):
        rng = np.random.default_rng(2)
        for d_in, d_out in [(2, 2), (2, 3), (3, 4)]:
            iso = random_channel(d_in, d_out, 1, rng)  # one Kraus = isometry
            assert abs(unitarity_jamiolkowski(iso) - 1.0) < 1e-10
        for _ in range(10):
            e = random_channel(2, 2, 2, rng)
            if len(e.kraus) >= 2:
                assert unitarity_jamiolkowski(e) < 1 - 1e-6

    def test_su2_closed_form(self):
        half = SpinJ(1)
        assert abs(unitarity_su2_closed(CovariantMixture.pure(half, half, 0)) - 1.0) < 1e-12
        assert abs(unitarity_su2_closed(CovariantMixture.pure(half, half, 2)) - 1 / 9) < 1e-12
        one = SpinJ(2)
        assert abs(unitarity_su2_closed(CovariantMixture(one, one, (0, 1, 0))) - 1 / 4) < 1e-12

    def test_su2_closed_matches_channel(self):
        rng = np.random.default_rng(3)
        for (a, b) in [(1, 1), (2, 2), (1, 2), (3, 1), (2, 3)]:
            sa, sb = SpinJ(a), SpinJ(b)
            n = len(coupled_labels(sa, sb))
            mix = CovariantMixture(sa, sb, tuple(rng.dirichlet([1] * n)))
            closed = unitarity_su2_closed(mix)
            direct = unitarity_jamiolkowski(covariant_channel(mix))
            assert abs(closed - direct) < 1e-10


class TestDeviation:
    def test_identity_zero(self):
        rep = deviation_avg(identity_channel(2), su2_generators(SpinJ(1)))
        assert rep.delta_total < 1e-14

    def test_extremal_qubit(self):
        e = extremal_channel(SpinJ(1), SpinJ(1), 2)
        rep = deviation_avg(e, su2_generators(SpinJ(1)))
        assert abs(rep.delta_total - 4 / 9) < 1e-12
        assert abs(deviation_su2_closed(CovariantMixture.pure(SpinJ(1), SpinJ(1), 2)) - 4 / 9) < 1e-12

    def test_u1_full_flip(self):
        spec = EnergySpectrum((0, 1))
        ch = build_extremal(spec, np.array([[0.0, 1.0], [1.0, 0.0]])).to_channel()
        rep = deviation_avg(ch, u1_generators(spec.levels))
        assert abs(rep.delta_total - 1 / 3) < 1e-12

    def test_report_consistency(self):
        e = extremal_channel(SpinJ(2), SpinJ(2), 4)
        gens = su2_generators(SpinJ(2))
        rep = deviation_avg(e, gens)
        d = e.d_in
        recon = (sum(rep.trace_terms) + sum(rep.square_terms)) / (d * (d + 1))
        assert abs(rep.delta_total - recon) < 1e-15

    def test_unequal_spins_closed_form(self):
        # deviation through the generator route equals the closed form
        mix = CovariantMixture.pure(SpinJ(1), SpinJ(2), 1)
        closed = deviation_su2_closed(mix)
        assert abs(closed - 1 / 36) < 1e-12
        direct = deviation_avg(covariant_channel(mix), su2_generators(SpinJ(1), SpinJ(2)))
        assert abs(closed - direct.delta_total) < 1e-10

    def test_closed_matches_channel_randomized(self):
        rng = np.random.default_rng(4)
        for (a, b) in [(1, 1), (2, 2), (1, 3), (3, 1)]:
            sa, sb = SpinJ(a), SpinJ(b)
            n = len(coupled_labels(sa, sb))
            mix = CovariantMixture(sa, sb, tuple(rng.dirichlet([1] * n)))
            closed = deviation_su2_closed(mix)
            direct = deviation_avg(covariant_channel(mix), su2_generators(sa, sb)).delta_total
            assert abs(closed - direct) < 1e-10

    def test_symmetric_unitaries_conserve(self):
        # unitaries commuting with every generator: exponentials of commutant
        # elements.  U(1): random diagonal phases; spin-carrying subsystem:
        # anything acting on the spectator factor only.
        rng = np.random.default_rng(5)
        spec = EnergySpectrum((0, 1, 3))
        gens = u1_generators(spec.levels)
        for _ in range(20):
            u = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, 3)))
            rep = deviation_avg(unitary_channel(u), gens)
            assert rep.delta_total < 1e-24

        jx, jy, jz = su2_generators(SpinJ(1)).j_in
        big = GeneratorSet(
            j_in=tuple(np.kron(g, np.eye(2)) for g in (jx, jy, jz)),
            j_out=tuple(np.kron(g, np.eye(2)) for g in (jx, jy, jz)),
        )
        for _ in range(20):
            v = haar_unitary(2, rng)
            u = np.kron(np.eye(2), v)  # commutant of J (x) I
            rep = deviation_avg(unitary_channel(u), big)
            assert rep.delta_total < 1e-24

    def test_rotations_do_not_conserve(self):
        # sanity: a generic rotation moves the polarization direction
        g = su2_generators(SpinJ(1))
        u = mat_exp_skew_hermitian(g.j_in[0], 1.0)
        assert deviation_avg(unitary_channel(u), g).delta_total > 1e-3


class TestQubitIdentity:
    def test_unitarity_deviation_relation(self):
        half = SpinJ(1)
        worst = 0.0
        for p0 in np.linspace(0, 1, 101):
            mix = CovariantMixture(half, half, (p0, 1 - p0))
            u = unitarity_su2_closed(mix)
            sd = np.sqrt(deviation_su2_closed(mix))
            worst = max(worst, abs(u - (1 - 4 * sd * (1 - sd))))
        assert worst < 1e-10


class TestPurityCondition:
    def test_unital_holds(self):
        assert purity_condition_holds(identity_channel(3))

    def test_embedding_into_larger_space_fails(self):
        # spin-1/2 -> spin-1 extremal channel spreads the maximally mixed
        # state over a strictly larger space
        e = extremal_channel(SpinJ(1), SpinJ(2), 1)
        assert not purity_condition_holds(e)

    def test_isometry_embedding_holds(self):
        e = random_channel(2, 4, 1, 6)
        assert purity_condition_holds(e)


class TestGeneratorSet:
    def test_rejects_non_traceless(self):
        with pytest.raises(ValueError):
            GeneratorSet(j_in=(np.eye(2),), j_out=(np.eye(2),))

    def test_u1_traceless_shift(self):
        gens = u1_generators((0, 1, 5))
        assert abs(np.trace(gens.j_in[0])) < 1e-12
