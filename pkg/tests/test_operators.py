import cmath
import math

import numpy as np
import pytest

from gkdual import (
    IndexRangeError,
    ParameterError,
    ShapeMismatchError,
    apply,
    check_a,
    commutator,
    conjugate_b,
    dgkcs,
    displacement,
    dual_basis_reconstruction,
    eigenvalues,
    even_odd,
    evolution,
    expectation,
    generalized_gkcs,
    gkcs,
    hamiltonian,
    harmonic,
    hydrogen,
    infinite_well,
    interpolator,
    ladder,
    moment_table,
    morse,
    number_operator,
    poschl_teller,
)


def interior(m, k=1):
    return m[:-k, :-k]


class TestLadder:
    def test_harmonic_is_standard_annihilation(self):
        a = ladder(harmonic(), 0.0, 12, "A")
        want = np.diag(np.sqrt(np.arange(1, 13)), k=1)
        assert np.array_equal(a.entries, want.astype(complex))

    def test_adjoint_is_exact_conjugate_transpose(self):
        a = ladder(poschl_teller(3), 0.8, 20, "A")
        adag = ladder(poschl_teller(3), 0.8, 20, "A_dag")
        assert np.array_equal(adag.entries, a.entries.conj().T)

    def test_dual_entry_value(self):
        ad = ladder(infinite_well(), 0.0, 8, "dualA")
        assert ad.entries[1, 2] == pytest.approx(math.sqrt(0.5), rel=1e-14)

    def test_phase_structure(self):
        alpha = 0.9
        a = ladder(infinite_well(), alpha, 6, "A")
        e = eigenvalues(infinite_well(), 6)
        for n in range(1, 7):
            want = math.sqrt(e[n]) * cmath.exp(1j * alpha * (e[n] - e[n - 1]))
            assert a.entries[n - 1, n] == pytest.approx(want, abs=1e-14)

    def test_eigenstate_property(self):
        z, alpha = 0.8 + 0.3j, 0.9
        s = gkcs(infinite_well(), z, alpha)
        a = ladder(infinite_well(), alpha, s.cutoff, "A")
        diff = apply(a, s).amplitudes - z * s.amplitudes
        assert np.linalg.norm(diff[:-1]) <= 10.0 * max(s.tail_bound, 1e-15)

    def test_dual_eigenstate_property(self):
        z, alpha = 0.5 * cmath.exp(0.4j), 1.3
        s = dgkcs(poschl_teller(3), z, alpha)
        a = ladder(poschl_teller(3), alpha, s.cutoff, "dualA")
        diff = apply(a, s).amplitudes - z * s.amplitudes
        assert np.linalg.norm(diff[:-1]) <= 1e-10

    def test_cutoff_limits(self):
        with pytest.raises(IndexRangeError):
            ladder(morse(4), 0.0, 5, "A")
        with pytest.raises(ParameterError):
            ladder(harmonic(), 0.0, 10, "Q")


class TestHamiltonian:
    def test_harmonic_diagonal(self):
        h = hamiltonian(harmonic(), 10)
        assert np.array_equal(np.diag(h.entries).real, np.arange(11.0))

    def test_poschl_teller_dual_values(self):
        h = hamiltonian(poschl_teller(3), 6, dual=True)
        n = np.arange(7.0)
        assert np.allclose(np.diag(h.entries).real, n / (n + 3.0), rtol=1e-14)

    @pytest.mark.parametrize("model", [harmonic(), infinite_well(), hydrogen(), morse(4)])
    def test_factorization(self, model):
        n_top = model.max_index() or 25
        a = ladder(model, 0.7, n_top, "A")
        h = hamiltonian(model, n_top)
        prod = a.dagger().entries @ a.entries
        assert np.max(np.abs(interior(prod) - interior(h.entries))) < 1e-12

    def test_number_operator(self):
        op = number_operator(5)
        basis3 = np.zeros(6, dtype=complex)
        basis3[3] = 1.0
        assert np.array_equal(op.entries @ basis3, 3.0 * basis3)


class TestEvolution:
    def test_identity_at_zero(self):
        s = evolution(infinite_well(), 0.0, 9)
        assert np.array_equal(s.entries, np.eye(10, dtype=complex))

    def test_unitary(self):
        s = evolution(hydrogen(), 1.7, 30)
        assert np.max(np.abs(s.entries @ s.entries.conj().T - np.eye(31))) < 1e-15

    def test_group_law(self):
        # phase angles stay small for these spectra, so the product of two
        # maps matches the combined map to near machine precision
        for model, n_top in ((harmonic(), 10), (hydrogen(), 30)):
            a = evolution(model, 0.6, n_top)
            b = evolution(model, 1.1, n_top)
            c = evolution(model, 1.7, n_top)
            assert np.max(np.abs(a.entries @ b.entries - c.entries)) < 1e-14

    def test_group_law_phase_conditioning(self):
        # for fast-growing spectra the roundoff scales with |alpha| * e_N
        model, n_top = poschl_teller(3), 15
        a = evolution(model, 0.6, n_top)
        b = evolution(model, 1.1, n_top)
        c = evolution(model, 1.7, n_top)
        e_top = eigenvalues(model, n_top)[-1]
        bound = 50.0 * np.finfo(float).eps * (1.0 + 1.7 * e_top)
        assert np.max(np.abs(a.entries @ b.entries - c.entries)) < bound

    def test_maps_phase_labels(self):
        z = 0.6
        s0 = gkcs(infinite_well(), z, 0.0)
        s1 = gkcs(infinite_well(), z, 0.8, min_cutoff=s0.cutoff)
        u = evolution(infinite_well(), 0.8, s0.cutoff)
        assert np.linalg.norm(u.entries @ s0.amplitudes - s1.amplitudes) < 1e-12


class TestConjugatePair:
    def test_harmonic_reduces_to_annihilation(self):
        b = conjugate_b(harmonic(), 0.0, 10, "B")
        a = ladder(harmonic(), 0.0, 10, "A")
        assert np.max(np.abs(b.entries - a.entries)) < 1e-14

    def test_entry_value(self):
        b = conjugate_b(infinite_well(), 0.0, 6, "B")
        assert b.entries[0, 1] == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-14)

    @pytest.mark.parametrize("model", [infinite_well(), poschl_teller(3), hydrogen()])
    def test_weyl_heisenberg_closure(self, model):
        n_top = 24
        alpha = 0.9
        a = ladder(model, alpha, n_top, "A")
        b = conjugate_b(model, alpha, n_top, "B")
        c1 = commutator(a, b.dagger())
        c2 = commutator(b, a.dagger())
        eye = np.eye(n_top + 1)
        assert np.max(np.abs(interior(c1.entries) - interior(eye))) < 1e-12
        assert np.max(np.abs(interior(c2.entries) - interior(eye))) < 1e-12

    def test_dual_closure(self):
        n_top = 24
        a = ladder(infinite_well(), 0.4, n_top, "dualA")
        b = conjugate_b(infinite_well(), 0.4, n_top, "dualB")
        c = commutator(a, b.dagger())
        assert np.max(np.abs(interior(c.entries) - np.eye(n_top))) < 1e-12


class TestCommutators:
    def test_harmonic_canonical(self):
        a = ladder(harmonic(), 0.0, 20, "A")
        c = commutator(a, a.dagger())
        assert np.max(np.abs(interior(c.entries) - np.eye(20))) < 1e-13

    def test_level_gaps_on_diagonal(self):
        a = ladder(infinite_well(), 0.5, 10, "A")
        c = commutator(a, a.dagger())
        assert c.entries[3, 3].real == pytest.approx(9.0, rel=1e-13)  # e_4 - e_3 = 24 - 15

    def test_dual_ladder_number_commutator(self):
        a = ladder(infinite_well(), 0.7, 18, "dualA")
        n_op = number_operator(18)
        c = commutator(a, n_op)
        assert np.max(np.abs(interior(c.entries) - interior(a.entries))) < 1e-13

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            commutator(ladder(harmonic(), 0.0, 5, "A"), ladder(harmonic(), 0.0, 6, "A"))


class TestCheckA:
    def test_harmonic_standard(self):
        assert np.array_equal(
            check_a(harmonic(), 9).entries, np.diag(np.sqrt(np.arange(1.0, 10.0)), 1).astype(complex)
        )

    def test_hydrogen_entry(self):
        op = check_a(hydrogen(), 5)
        assert op.entries[0, 1] == pytest.approx(math.sqrt(0.75), rel=1e-14)

    @pytest.mark.parametrize("model", [infinite_well(), hydrogen(), poschl_teller(2.5)])
    def test_conjugation_recovers_phased_ladder(self, model):
        # residual taken relative to the ladder magnitude: the absolute
        # roundoff grows with the phase angles |alpha| * e_n
        alpha, n_top = 1.3, 22
        s = evolution(model, alpha, n_top)
        conj = s.entries @ check_a(model, n_top).entries @ s.entries.conj().T
        a = ladder(model, alpha, n_top, "A")
        rel = np.max(np.abs(conj - a.entries)) / np.max(np.abs(a.entries))
        assert rel < 1e-13


class TestDisplacement:
    def test_zero_label_is_identity(self):
        d = displacement(infinite_well(), 0.0, 0.3, 12, "D")
        assert np.max(np.abs(d.entries - np.eye(13))) < 1e-14

    def test_harmonic_canonical(self):
        d = displacement(harmonic(), 0.3, 0.0, 40, "D")
        col = d.entries[:, 0]
        s = gkcs(harmonic(), 0.3, 0.0, min_cutoff=40)
        fid = abs(np.vdot(s.amplitudes, col)) / np.linalg.norm(col)
        assert fid >= 1.0 - 1e-8

    def test_harmonic_all_variants_agree(self):
        # with a unit deformation profile the conjugate pair degenerates and
        # D and V coincide with the canonical displacement
        d = displacement(harmonic(), 0.3, 0.0, 30, "D")
        v = displacement(harmonic(), 0.3, 0.0, 30, "V")
        assert np.max(np.abs(d.entries - v.entries)) < 1e-12

    @pytest.mark.parametrize("model", [infinite_well(), poschl_teller(3)])
    def test_vacuum_orbit_matches_family(self, model):
        z, alpha = 0.3, 0.5
        d = displacement(model, z, alpha, 60, "D")
        col = d.entries[:, 0]
        s = gkcs(model, z, alpha, min_cutoff=60)
        fid = abs(np.vdot(s.amplitudes, col)) / np.linalg.norm(col)
        assert fid >= 1.0 - 1e-6

    @pytest.mark.parametrize("model", [infinite_well(), poschl_teller(3)])
    def test_dual_vacuum_orbit(self, model):
        z, alpha = 0.3, 0.5
        d = displacement(model, z, alpha, 60, "dualD")
        col = d.entries[:, 0]
        s = dgkcs(model, z, alpha, min_cutoff=60)
        fid = abs(np.vdot(s.amplitudes, col)) / np.linalg.norm(col)
        assert fid >= 1.0 - 1e-6

    def test_v_variant_constructs(self):
        v = displacement(infinite_well(), 0.25, 0.4, 40, "V")
        col = v.entries[:, 0]
        assert np.linalg.norm(col) > 0.5  # orbit state exists; no family claims attached


class TestInterpolator:
    def test_harmonic_identity(self):
        t = interpolator(harmonic(), 15)
        assert np.max(np.abs(t.entries - np.eye(16))) < 1e-12

    def test_well_entry(self):
        t = interpolator(infinite_well(), 8)
        assert t.entries[2, 2].real == pytest.approx(12.0, rel=1e-12)  # sqrt(24/(1/6))

    @pytest.mark.parametrize("model", [infinite_well(), hydrogen(), poschl_teller(3)])
    def test_log_domain_duality(self, model):
        # T maps unnormalized gk amplitudes to unnormalized dual amplitudes,
        # exactly in the log domain
        n_top = 60
        t = interpolator(model, n_top)
        table = moment_table(model, n_top)
        ln_z = math.log(0.45)
        n = np.arange(n_top + 1)
        log_gk = n * ln_z - 0.5 * table.log_rho
        log_dual = n * ln_z - 0.5 * table.log_mu
        assert np.max(np.abs(log_gk + t.log_diag - log_dual)) < 1e-12

    def test_fixed_time_interpolation(self):
        # exp(-i (H_dual - H) t) T maps the unnormalized time-labeled state
        # to its unnormalized dual
        model = infinite_well()
        J, theta, t_val = 0.4, 1.2, 0.7
        s = generalized_gkcs(model, J, theta, t_val)
        sd = generalized_gkcs(model, J, theta, t_val, dual=True, min_cutoff=s.cutoff)
        s = generalized_gkcs(model, J, theta, t_val, min_cutoff=sd.cutoff)
        n_top = s.cutoff
        t_op = interpolator(model, n_top)
        h = hamiltonian(model, n_top).entries
        hd = hamiltonian(model, n_top, dual=True).entries
        phase = np.diag(np.exp(-1j * np.diag(hd - h) * t_val))
        lhs = phase @ (t_op.entries @ s.unnormalized())
        rhs = sd.unnormalized()
        assert np.max(np.abs(lhs - rhs)) < 1e-10


class TestApply:
    def test_identity(self):
        s = gkcs(harmonic(), 0.4, 0.0)
        eye = number_operator(s.cutoff)
        out = apply(
            interpolator(harmonic(), s.cutoff), s
        )
        assert np.max(np.abs(out.amplitudes - s.amplitudes)) < 1e-12
        assert out.boundary_contamination >= 0.0
        del eye

    def test_squared_dual_lowering_on_parity_states(self):
        model = infinite_well()
        z, alpha = 0.45 * cmath.exp(0.8j), 0.6
        for parity in "+-":
            s = even_odd(model, z, alpha, parity)
            a = ladder(model, alpha, s.cutoff, "dualA")
            sq = a.entries @ a.entries
            diff = sq @ s.amplitudes - (z * z) * s.amplitudes
            assert np.linalg.norm(diff[:-2]) < 1e-10

    def test_cutoff_mismatch(self):
        s = gkcs(harmonic(), 0.4, 0.0)
        with pytest.raises(ShapeMismatchError):
            apply(number_operator(s.cutoff + 3), s)


class TestHeisenbergPicture:
    def test_time_evolved_lowering_operator(self):
        # A(t) = e^{iHt} a_check e^{-iHt} annihilates the state labeled (z, -t)
        model = infinite_well()
        z, t_val = 0.5, 0.8
        s = gkcs(model, z, -t_val)
        u = evolution(model, t_val, s.cutoff).entries  # e^{-iHt}
        a_t = u.conj().T @ check_a(model, s.cutoff).entries @ u
        diff = a_t @ s.amplitudes - z * s.amplitudes
        assert np.linalg.norm(diff[:-1]) < 1e-12


class TestDualBasisReconstruction:
    def test_mu_normalizer_restores_basis(self):
        out = dual_basis_reconstruction(infinite_well(), 0.9, 10)
        assert out["unit_modulus_convention"] == "mu"
        assert np.max(out["modulus_error_mu_normalizer"]) < 1e-12
        # the e-moment normalizer misses by sqrt(mu/rho), which collapses the
        # modulus toward zero for this spectrum
        assert np.max(out["modulus_error_rho_normalizer"]) > 0.5

    def test_exact_at_zero_phase(self):
        out = dual_basis_reconstruction(poschl_teller(3), 0.0, 8)
        assert np.max(out["distance_mu_normalizer"]) < 1e-12

    def test_self_dual_degenerate_case(self):
        out = dual_basis_reconstruction(harmonic(), 0.0, 8)
        assert np.max(out["distance_mu_normalizer"]) < 1e-12
        assert np.max(out["distance_rho_normalizer"]) < 1e-12
