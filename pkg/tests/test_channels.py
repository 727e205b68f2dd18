"""Channel catalog: generators, closed forms, asymptotics and literals."""

import json

import numpy as np
import pytest

from esdkit import (
    CollectiveDephasing,
    CustomChannel,
    ExplicitSamples,
    IndependentDecay,
    IndependentDephasing,
    SinglePoint,
    XFamily,
    asymptotic_set,
    bell,
    embed_x,
    format_channel_literal,
    generator,
    is_catalog,
    jump_operators,
    liouvillian,
    make_density,
    make_x,
    max_rate,
    maximally_mixed,
    parse_channel_literal,
    project_x,
    propagate_numeric,
    propagate_x_closed,
    random_density,
    random_x,
    set_contains,
    thermal_product,
    x_closed_curves,
)
from esdkit.errors import (
    OutOfRangeError,
    ParseError,
    StepTooLargeError,
    UnsupportedChannelError,
    ValidationError,
)

from _oracles import (
    collective_jumps,
    decay_jumps,
    dephase_jumps,
    lindblad_matrix,
    rk4_evolve,
)


# --- construction and validation -------------------------------------------

def test_negative_rates_rejected():
    with pytest.raises(OutOfRangeError):
        IndependentDecay(-0.1, 1.0)
    with pytest.raises(OutOfRangeError):
        IndependentDecay(1.0, 1.0, nbar=-0.5)
    with pytest.raises(OutOfRangeError):
        IndependentDephasing(0.3, -0.3)
    with pytest.raises(OutOfRangeError):
        CollectiveDephasing(-1.0)


def test_all_zero_rates_rejected():
    with pytest.raises(OutOfRangeError):
        IndependentDecay(0.0, 0.0)
    with pytest.raises(OutOfRangeError):
        IndependentDephasing(0.0, 0.0)
    with pytest.raises(OutOfRangeError):
        CollectiveDephasing(0.0)


def test_one_sided_rates_allowed():
    assert IndependentDecay(1.0, 0.0).gamma_b == 0.0
    assert IndependentDephasing(0.0, 2.0).kappa_a == 0.0


def test_custom_channel_validation():
    ok = CustomChannel(((np.eye(4), 1.0),))
    assert len(ok.jumps) == 1
    with pytest.raises(ValidationError):
        CustomChannel(())
    with pytest.raises(ValidationError):
        CustomChannel(((np.eye(3), 1.0),))
    with pytest.raises(OutOfRangeError):
        CustomChannel(((np.eye(4), -1.0),))
    with pytest.raises(OutOfRangeError):
        CustomChannel(((np.eye(4), 0.0),))


def test_is_catalog():
    assert is_catalog(IndependentDecay(1.0, 1.0))
    assert is_catalog(IndependentDephasing(1.0, 1.0))
    assert is_catalog(CollectiveDephasing(1.0))
    assert not is_catalog(CustomChannel(((np.eye(4), 1.0),)))


def test_max_rate_and_zero_rate_jumps_dropped():
    assert max_rate(IndependentDecay(0.5, 2.0, nbar=1.0)) == 4.0
    assert max_rate(IndependentDephasing(0.3, 0.7)) == 0.35
    assert max_rate(CollectiveDephasing(1.5)) == 1.5
    # nbar = 0 kills both raising jumps; a zero gamma kills that qubit's pair
    assert len(jump_operators(IndependentDecay(1.0, 1.0, nbar=0.0))) == 2
    assert len(jump_operators(IndependentDecay(1.0, 0.0, nbar=0.5))) == 2
    assert len(jump_operators(IndependentDecay(1.0, 1.0, nbar=0.5))) == 4


# --- generator and liouvillian ---------------------------------------------

def test_generator_matches_oracle_superoperator():
    cases = [
        (IndependentDecay(0.7, 1.3, nbar=0.4), decay_jumps(0.7, 1.3, 0.4)),
        (IndependentDephasing(0.5, 1.1), dephase_jumps(0.5, 1.1)),
        (CollectiveDephasing(0.9), collective_jumps(0.9)),
    ]
    lmat_by_case = [lindblad_matrix(jumps) for _, jumps in cases]
    for seed in range(20):
        rho = random_density(seed)
        for (channel, _), lmat in zip(cases, lmat_by_case):
            direct = generator(channel, rho)
            via_oracle = (lmat @ rho.matrix.reshape(16)).reshape(4, 4)
            np.testing.assert_allclose(direct, via_oracle, atol=1e-14)


def test_liouvillian_consistent_with_generator():
    for channel in (
        IndependentDecay(1.0, 0.5, nbar=0.2),
        IndependentDephasing(1.0, 1.0),
        CollectiveDephasing(2.0),
        CustomChannel(((np.diag([1.0, 0, 0, -1.0]).astype(complex), 0.8),)),
    ):
        lv = liouvillian(channel)
        for seed in range(5):
            m = random_density(seed).matrix
            np.testing.assert_allclose(
                (lv @ m.reshape(16)).reshape(4, 4), generator(channel, m), atol=1e-14
            )


def test_generator_preserves_trace_and_hermiticity():
    for channel in (
        IndependentDecay(1.0, 1.0, nbar=0.5),
        IndependentDephasing(0.4, 0.6),
        CollectiveDephasing(1.0),
    ):
        for seed in range(10):
            deriv = generator(channel, random_density(seed))
            assert abs(np.trace(deriv)) < 1e-14
            np.testing.assert_allclose(deriv, deriv.conj().T, atol=1e-15)


def test_generator_stationary_states():
    ground = make_density(np.diag([0.0, 0.0, 0.0, 1.0]).astype(complex))
    np.testing.assert_allclose(
        generator(IndependentDecay(1.0, 2.0, nbar=0.0), ground), 0.0, atol=1e-15
    )
    diag = make_density(np.diag([0.1, 0.2, 0.3, 0.4]).astype(complex))
    np.testing.assert_allclose(
        generator(IndependentDephasing(1.0, 1.0), diag), 0.0, atol=1e-15
    )
    # psi+ lives in the decoherence-free subspace of the collective channel
    psi = embed_x(bell("psi+"))
    np.testing.assert_allclose(
        generator(CollectiveDephasing(3.0), psi), 0.0, atol=1e-15
    )
    thermal = thermal_product(0.5)
    np.testing.assert_allclose(
        generator(IndependentDecay(1.0, 1.0, nbar=0.5), thermal), 0.0, atol=1e-15
    )


# --- numeric propagation ----------------------------------------------------

def test_propagate_numeric_time_validation():
    rho = maximally_mixed()
    channel = IndependentDecay(1.0, 1.0)
    with pytest.raises(ValidationError):
        propagate_numeric(rho, channel, -1.0)
    with pytest.raises(ValidationError):
        propagate_numeric(rho, channel, 1.0, dt=0.0)
    with pytest.raises(ValidationError):
        propagate_numeric(rho, channel, 1.0, dt=2.0)
    assert propagate_numeric(rho, channel, 0.0) is rho


def test_propagate_numeric_matches_oracle_rk4():
    channel = IndependentDecay(0.8, 1.2, nbar=0.3)
    lmat = lindblad_matrix(decay_jumps(0.8, 1.2, 0.3))
    rho = random_density(7)
    out = propagate_numeric(rho, channel, 0.9, dt=1e-3)
    ref = rk4_evolve(lmat, rho.matrix, 0.9, 1e-3)
    ref = ref / np.trace(ref).real
    np.testing.assert_allclose(out.matrix, ref, atol=1e-12)


def test_propagate_numeric_exponential_population():
    # from |ee> under zero-temperature decay at gamma = 1 on each qubit,
    # the excited-excited population is exp(-2 t)
    rho = make_density(np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex))
    out = propagate_numeric(rho, IndependentDecay(1.0, 1.0), 1.0)
    assert abs(out.matrix[0, 0].real - np.exp(-2.0)) < 1e-8


def test_propagate_numeric_default_step_scales_with_rate():
    # same physical trajectory expressed in two different time units
    rho = random_density(3)
    slow = propagate_numeric(rho, IndependentDecay(1.0, 1.0), 2.0)
    fast = propagate_numeric(rho, IndependentDecay(10.0, 10.0), 0.2)
    np.testing.assert_allclose(slow.matrix, fast.matrix, atol=1e-10)


def test_propagate_numeric_coarse_step_fails_validation():
    rho = make_density(np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex))
    with pytest.raises(StepTooLargeError):
        propagate_numeric(rho, IndependentDecay(1.0, 1.0), 40.0, dt=4.0)


def test_propagate_numeric_semigroup():
    channel = CollectiveDephasing(1.0)
    rho = random_density(11)
    one_hop = propagate_numeric(rho, channel, 1.0, dt=1e-3)
    two_hop = propagate_numeric(
        propagate_numeric(rho, channel, 0.4, dt=1e-3), channel, 0.6, dt=1e-3
    )
    np.testing.assert_allclose(one_hop.matrix, two_hop.matrix, atol=1e-8)


def test_propagate_numeric_preserves_x_pattern():
    rho = embed_x(random_x(5))
    for channel in (
        IndependentDecay(1.0, 0.7, nbar=0.6),
        IndependentDephasing(0.9, 0.4),
        CollectiveDephasing(1.3),
    ):
        out = propagate_numeric(rho, channel, 1.5).matrix
        off = out.copy()
        for i, j in ((0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (3, 0), (1, 2), (2, 1)):
            off[i, j] = 0.0
        assert float(np.abs(off).max()) < 1e-10


# --- closed-form X dynamics -------------------------------------------------

def test_closed_curves_at_time_zero():
    x = random_x(2)
    a, b, c, d, w, z = x_closed_curves(x, IndependentDecay(1.0, 1.0, 0.5), [0.0])
    assert (a[0], b[0], c[0], d[0]) == (x.a, x.b, x.c, x.d)
    assert (w[0], z[0]) == (x.w, x.z)


def test_closed_curves_shape_and_negative_time():
    x = random_x(2)
    channel = IndependentDephasing(1.0, 1.0)
    curves = x_closed_curves(x, channel, np.linspace(0.0, 2.0, 7))
    assert all(curve.shape == (7,) for curve in curves)
    with pytest.raises(ValidationError):
        x_closed_curves(x, channel, [-0.1, 0.5])


def test_closed_curves_refuse_custom_channel():
    with pytest.raises(UnsupportedChannelError):
        x_closed_curves(random_x(0), CustomChannel(((np.eye(4), 1.0),)), [1.0])


def test_closed_decay_pure_family_structure():
    # |psi> = sqrt(a)|ee> + sqrt(1-a)|gg> under zero-temperature decay:
    # with p = exp(-gamma t), a -> a p^2, w -> w p, and the singly excited
    # populations are each a p (1 - p)
    a0 = 0.7
    x = make_x(a0, 0.0, 0.0, 1.0 - a0, w=np.sqrt(a0 * (1.0 - a0)))
    tau = np.array([0.0, 0.3, 1.0, 2.5])
    p = np.exp(-tau)
    a, b, c, d, w, z = x_closed_curves(x, IndependentDecay(1.0, 1.0, 0.0), tau)
    np.testing.assert_allclose(a, a0 * p**2, atol=1e-15)
    np.testing.assert_allclose(b, a0 * p * (1.0 - p), atol=1e-15)
    np.testing.assert_allclose(c, a0 * p * (1.0 - p), atol=1e-15)
    np.testing.assert_allclose(w, x.w * p, atol=1e-15)
    np.testing.assert_allclose(z, 0.0, atol=1e-15)


def test_closed_dephasing_freezes_populations():
    x = random_x(9)
    tau = np.array([0.5, 1.5])
    a, b, c, d, w, z = x_closed_curves(x, IndependentDephasing(0.8, 0.6), tau)
    np.testing.assert_array_equal(a, [x.a, x.a])
    np.testing.assert_array_equal(d, [x.d, x.d])
    # both coherences shrink by exp(-(kappa_a + kappa_b) t)
    np.testing.assert_allclose(w, x.w * np.exp(-1.4 * tau), rtol=1e-14)
    np.testing.assert_allclose(z, x.z * np.exp(-1.4 * tau), rtol=1e-14)


def test_closed_collective_keeps_inner_coherence():
    x = make_x(0.2, 0.3, 0.3, 0.2, w=0.1 + 0.05j, z=0.2 - 0.1j)
    tau = np.array([0.0, 0.7, 3.0])
    a, b, c, d, w, z = x_closed_curves(x, CollectiveDephasing(1.1), tau)
    np.testing.assert_allclose(w, x.w * np.exp(-2.2 * tau), rtol=1e-14)
    np.testing.assert_array_equal(z, np.full(3, x.z))
    np.testing.assert_array_equal(b, np.full(3, x.b))


def test_closed_thermal_fixed_point():
    nbar = 0.5
    x = project_x(thermal_product(nbar))
    a, b, c, d, w, z = x_closed_curves(
        x, IndependentDecay(1.0, 2.0, nbar), np.array([0.0, 1.0, 10.0])
    )
    np.testing.assert_allclose(a, x.a, atol=1e-15)
    np.testing.assert_allclose(b, x.b, atol=1e-15)
    np.testing.assert_allclose(c, x.c, atol=1e-15)
    np.testing.assert_allclose(d, x.d, atol=1e-15)


def test_closed_one_sided_decay_freezes_other_qubit():
    x = random_x(12)
    # gamma_b = 0: qubit B's reduced populations never change
    a, b, c, d, w, z = x_closed_curves(
        x, IndependentDecay(1.0, 0.0, nbar=0.3), np.array([0.0, 0.5, 4.0])
    )
    np.testing.assert_allclose(a + c, x.a + x.c, atol=1e-15)
    np.testing.assert_allclose(b + d, x.b + x.d, atol=1e-15)


def test_closed_matches_numeric_across_catalog():
    channels_and_jumps = [
        (IndependentDecay(1.0, 1.0, nbar=0.0), decay_jumps(1.0, 1.0, 0.0)),
        (IndependentDecay(0.6, 1.4, nbar=0.5), decay_jumps(0.6, 1.4, 0.5)),
        (IndependentDephasing(1.0, 0.5), dephase_jumps(1.0, 0.5)),
        (CollectiveDephasing(1.0), collective_jumps(1.0)),
    ]
    times = [0.25, 1.0, 3.0]
    for channel, jumps in channels_and_jumps:
        lmat = lindblad_matrix(jumps)
        for seed in range(10):
            x = random_x(seed)
            rho0 = embed_x(x).matrix
            for t in times:
                closed = embed_x(propagate_x_closed(x, channel, t)).matrix
                ref = rk4_evolve(lmat, rho0, t, 1e-3)
                np.testing.assert_allclose(closed, ref, atol=1e-6)


def test_closed_semigroup_property():
    x = random_x(4)
    for channel in (
        IndependentDecay(1.0, 0.8, nbar=0.7),
        IndependentDephasing(0.5, 0.5),
        CollectiveDephasing(0.9),
    ):
        direct = propagate_x_closed(x, channel, 1.7)
        chained = propagate_x_closed(
            propagate_x_closed(x, channel, 0.6), channel, 1.1
        )
        assert abs(direct.a - chained.a) < 1e-12
        assert abs(direct.d - chained.d) < 1e-12
        assert abs(direct.w - chained.w) < 1e-12
        assert abs(direct.z - chained.z) < 1e-12


# --- asymptotic sets --------------------------------------------------------

def test_thermal_product_values():
    rho = thermal_product(0.5)
    np.testing.assert_allclose(
        np.diag(rho.matrix).real, [0.0625, 0.1875, 0.1875, 0.5625], atol=1e-15
    )
    ground = thermal_product(0.0)
    np.testing.assert_array_equal(np.diag(ground.matrix).real, [0, 0, 0, 1])
    with pytest.raises(OutOfRangeError):
        thermal_product(-0.1)


def test_asymptotic_set_catalog():
    aset = asymptotic_set(IndependentDecay(1.0, 2.0, nbar=0.5))
    assert isinstance(aset, SinglePoint)
    np.testing.assert_allclose(
        aset.state.matrix, thermal_product(0.5).matrix, atol=1e-15
    )
    deph = asymptotic_set(IndependentDephasing(1.0, 1.0))
    assert deph == XFamily(w_zero=True, z_zero=True)
    coll = asymptotic_set(CollectiveDephasing(1.0))
    assert coll == XFamily(w_zero=True, z_zero=False)


def test_asymptotic_set_refusals():
    with pytest.raises(UnsupportedChannelError):
        asymptotic_set(CustomChannel(((np.eye(4), 1.0),)))
    with pytest.raises(UnsupportedChannelError):
        asymptotic_set(IndependentDecay(1.0, 0.0))
    with pytest.raises(UnsupportedChannelError):
        asymptotic_set(IndependentDephasing(0.0, 1.0))


def test_set_contains_single_point():
    aset = asymptotic_set(IndependentDecay(1.0, 1.0, nbar=0.0))
    assert set_contains(aset, thermal_product(0.0))
    assert not set_contains(aset, maximally_mixed())


def test_set_contains_x_family():
    diagonal_only = XFamily(w_zero=True, z_zero=True)
    z_allowed = XFamily(w_zero=True, z_zero=False)
    diag = make_density(np.diag([0.1, 0.2, 0.3, 0.4]).astype(complex))
    with_z = embed_x(make_x(0.1, 0.4, 0.4, 0.1, z=0.2))
    with_w = embed_x(make_x(0.4, 0.1, 0.1, 0.4, w=0.2))
    assert set_contains(diagonal_only, diag)
    assert not set_contains(diagonal_only, with_z)
    assert set_contains(z_allowed, diag)
    assert set_contains(z_allowed, with_z)
    assert not set_contains(z_allowed, with_w)
    # a dense matrix with off-pattern weight is outside every X family
    dense = random_density(1)
    assert not set_contains(z_allowed, dense)


def test_set_contains_explicit_samples():
    members = ExplicitSamples((thermal_product(0.0), maximally_mixed()))
    assert set_contains(members, maximally_mixed())
    assert not set_contains(members, thermal_product(1.0))
    with pytest.raises(ValidationError):
        ExplicitSamples((np.eye(4) / 4.0,))


def test_long_time_numeric_lands_in_asymptotic_set():
    rho = random_density(8)
    for channel in (
        IndependentDecay(1.0, 1.0, nbar=0.5),
        IndependentDephasing(1.0, 1.0),
        CollectiveDephasing(1.0),
    ):
        late = propagate_numeric(rho, channel, 25.0)
        assert set_contains(asymptotic_set(channel), late, atol=1e-6)


# --- literals ---------------------------------------------------------------

def test_channel_literal_round_trip():
    for channel in (
        IndependentDecay(1.0, 0.5, nbar=0.25),
        IndependentDephasing(0.3, 0.7),
        CollectiveDephasing(1.5),
    ):
        assert parse_channel_literal(format_channel_literal(channel)) == channel


def test_channel_literal_forms():
    assert parse_channel_literal("decay:1,1,0") == IndependentDecay(1.0, 1.0, 0.0)
    assert parse_channel_literal(" dephase:0.5,0.5 ") == IndependentDephasing(0.5, 0.5)
    assert parse_channel_literal("collective:2.0") == CollectiveDephasing(2.0)


def test_channel_literal_errors():
    with pytest.raises(ParseError):
        parse_channel_literal("squeeze:1.0")
    with pytest.raises(ParseError):
        parse_channel_literal("decay:1,1")
    with pytest.raises(ParseError):
        parse_channel_literal("dephase:1,abc")
    with pytest.raises(UnsupportedChannelError):
        format_channel_literal(CustomChannel(((np.eye(4), 1.0),)))


def test_custom_channel_from_json_file(tmp_path):
    # sigma_z (x) I as a dense literal: diag(1, 1, -1, -1)
    entries = []
    diag = [1.0, 1.0, -1.0, -1.0]
    for i in range(4):
        for j in range(4):
            entries.append(f"{diag[i] if i == j else 0.0}:0.0")
    payload = {"jumps": [{"matrix": "dense:" + ",".join(entries), "rate": 0.5}]}
    path = tmp_path / "channel.json"
    path.write_text(json.dumps(payload))
    channel = parse_channel_literal(f"custom:{path}")
    assert isinstance(channel, CustomChannel)
    op, rate = channel.jumps[0]
    np.testing.assert_array_equal(op, np.diag(diag).astype(complex))
    assert rate == 0.5
    # behaves as dephasing of qubit A at kappa_a = 2 * rate
    x = make_x(0.4, 0.1, 0.1, 0.4, w=0.2, z=0.05)
    out = propagate_numeric(embed_x(x), channel, 1.0)
    assert abs(out.matrix[0, 3] - x.w * np.exp(-1.0)) < 1e-8


def test_custom_channel_file_errors(tmp_path):
    with pytest.raises(ParseError):
        parse_channel_literal("custom:/nonexistent/file.json")
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    with pytest.raises(ParseError):
        parse_channel_literal(f"custom:{bad_json}")
    no_jumps = tmp_path / "empty.json"
    no_jumps.write_text(json.dumps({"rates": []}))
    with pytest.raises(ParseError):
        parse_channel_literal(f"custom:{no_jumps}")
    missing_rate = tmp_path / "missing.json"
    missing_rate.write_text(json.dumps({"jumps": [{"matrix": "dense:bad"}]}))
    with pytest.raises(ParseError):
        parse_channel_literal(f"custom:{missing_rate}")
