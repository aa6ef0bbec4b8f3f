import math
from fractions import Fraction

import pytest

from conftest import random_sequence
from spinchain.chain import ChainSpec
from spinchain.engine import apply_sequence
from spinchain.events import CouplingDelay, EffectivePair, HardPulse, PulseSequence
from spinchain.pauli import AXES, ladder_minus, soliton_minus, spin_op
from spinchain.sequences import (
    ParseError,
    build_inept,
    build_isotropic_chain,
    build_soliton,
    format_sequence,
    indirect_swap_parts,
    indirect_swap_timing,
    mirror_sequence,
    parse_sequence,
)

SQRT3 = math.sqrt(3.0)


def signed_overlap(seq, chain, source, target, axis):
    out = apply_sequence(spin_op(source, axis, chain.n).to_sum(), seq, chain)
    return out.overlap(spin_op(target, axis, chain.n).to_sum())


class TestSolitonBuilder:
    def test_n3_structure(self):
        named = build_soliton(3, 1.0)
        delays = [ev for ev in named.sequence.events if isinstance(ev, CouplingDelay)]
        assert len(delays) == 4
        assert named.exact_duration == Fraction(2)

    @pytest.mark.parametrize("n", range(3, 11))
    def test_duration_formula(self, n):
        named = build_soliton(n, 1.0)
        assert named.exact_duration == Fraction(n + 1, 2)
        delays = [ev for ev in named.sequence.events if ev.duration > 0]
        assert len(delays) == n + 1
        assert all(ev.duration == 0.5 for ev in delays)

    def test_duration_scales_with_J(self):
        named = build_soliton(10, 2.0)
        assert named.exact_duration == Fraction(11, 4)

    def test_transfers_all_components_with_plus_signs(self):
        n = 5
        chain = ChainSpec.uniform(n, 1.0)
        seq = build_soliton(n, 1.0).sequence
        for axis in AXES:
            overlap = signed_overlap(seq, chain, 1, n, axis)
            assert overlap.real == pytest.approx(1.0, abs=1e-12)
            assert abs(overlap.imag) < 1e-12

    def test_ladder_transfer(self):
        n = 5
        chain = ChainSpec.uniform(n, 1.0)
        seq = build_soliton(n, 1.0).sequence
        out = apply_sequence(ladder_minus(1, n), seq, chain)
        assert abs(out.overlap(ladder_minus(n, n)) - 1.0) < 1e-12

    def test_encode_blocks_produce_soliton_ladder(self):
        n = 5
        chain = ChainSpec.uniform(n, 1.0)
        named = build_soliton(n, 1.0)
        encode_events = named.sequence.events[:6]  # encode-1 + encode-2
        out = apply_sequence(ladder_minus(1, n), PulseSequence(n, encode_events), chain)
        assert abs(out.overlap(soliton_minus(3, n)) - 1.0) < 1e-12

    def test_decode_blocks_recover_ladder(self):
        n = 5
        chain = ChainSpec.uniform(n, 1.0)
        named = build_soliton(n, 1.0)
        tail = named.sequence.events[-6:]  # final advance block + decode
        out = apply_sequence(soliton_minus(n, n), PulseSequence(n, tail), chain)
        assert abs(out.overlap(ladder_minus(n, n)) - 1.0) < 1e-12

    def test_too_short_rejected(self):
        with pytest.raises(ValueError, match="at least 3"):
            build_soliton(2, 1.0)

    def test_block_partition_covers_events(self):
        named = build_soliton(6, 1.0)
        assert sum(count for _, count in named.blocks) == len(named.sequence.events)
        labels = [label for label, _ in named.blocks]
        assert labels[:2] == ["encode-1", "encode-2"]
        assert labels[-1] == "decode"
        assert len(labels) == 6 + 1  # n+1 blocks carry one delay each


class TestIsotropicBuilder:
    def test_single_pair(self):
        named = build_isotropic_chain(2, 1.0)
        assert named.exact_duration == Fraction(3, 2)
        assert len(named.sequence.events) == 3

    def test_duration_formula(self):
        named = build_isotropic_chain(10, 1.0)
        assert named.exact_duration == Fraction(27, 2)

    def test_full_transfer(self):
        n = 4
        chain = ChainSpec.uniform(n, 1.0)
        seq = build_isotropic_chain(n, 1.0).sequence
        for axis in AXES:
            overlap = signed_overlap(seq, chain, 1, n, axis)
            assert overlap.real == pytest.approx(1.0, abs=1e-12)

    def test_first_step_pattern(self):
        # after the first XX block: I1x stays, I1y -> 2 I1z I2x,
        # I1z -> 2 I1y I2x up to the documented sign
        n = 3
        chain = ChainSpec.uniform(n, 1.0)
        first = PulseSequence(n, build_isotropic_chain(n, 1.0).sequence.events[:1])
        out_x = apply_sequence(spin_op(1, "x", n).to_sum(), first, chain)
        assert out_x == spin_op(1, "x", n).to_sum()
        out_y = apply_sequence(spin_op(1, "y", n).to_sum(), first, chain)
        assert abs(out_y.coefficient("ZXI") - 0.5) < 1e-14
        out_z = apply_sequence(spin_op(1, "z", n).to_sum(), first, chain)
        assert abs(abs(out_z.coefficient("YXI")) - 0.5) < 1e-14

    def test_blocks_are_single_events(self):
        named = build_isotropic_chain(4, 1.0)
        assert all(count == 1 for _, count in named.blocks)
        assert len(named.blocks) == 9


class TestIneptBuilder:
    def test_durations(self):
        assert build_inept(2, 1.0).exact_duration == Fraction(1)
        assert build_inept(6, 1.0).exact_duration == Fraction(3)

    def test_first_delay_creates_antiphase(self):
        n = 2
        chain = ChainSpec.uniform(n, 1.0)
        first = PulseSequence(n, build_inept(n, 1.0).sequence.events[:1])
        out = apply_sequence(spin_op(1, "x", n).to_sum(), first, chain)
        assert abs(out.coefficient("YZ") - 0.5) < 1e-14

    @pytest.mark.parametrize("n", range(2, 9))
    def test_single_component_transfer(self, n):
        chain = ChainSpec.uniform(n, 1.0)
        seq = build_inept(n, 1.0).sequence
        overlap_x = signed_overlap(seq, chain, 1, n, "x")
        assert overlap_x.real == pytest.approx(1.0, abs=1e-12)
        out_z = apply_sequence(spin_op(1, "z", n).to_sum(), seq, chain)
        assert abs(out_z.overlap(spin_op(n, "z", n).to_sum())) < 0.99


class TestIndirectSwapTiming:
    def test_odd_chains(self):
        assert indirect_swap_timing(3) == pytest.approx(3 * SQRT3 / 2)
        assert indirect_swap_timing(5) == pytest.approx(3 * SQRT3)

    def test_even_chain_has_trailing_mix(self):
        assert indirect_swap_timing(4) == pytest.approx(3 * SQRT3 / 2 + 1.5)
        assert indirect_swap_parts(4) == (1, 1)

    def test_scaling_with_J(self):
        assert indirect_swap_timing(3, J=2.0) == pytest.approx(3 * SQRT3 / 4)

    def test_too_short(self):
        with pytest.raises(ValueError):
            indirect_swap_timing(2)

    def test_timing_only_entry(self):
        from spinchain.sequences import build_timing_only

        named = build_timing_only("swap13", 4, 1.0)
        assert named.sequence is None
        assert named.duration == pytest.approx(indirect_swap_timing(4, 1.0))
        with pytest.raises(ValueError):
            build_timing_only("soliton", 4, 1.0)


class TestMirror:
    def test_involution(self, rng):
        seq = random_sequence(rng, 5, 20)
        assert mirror_sequence(mirror_sequence(seq)) == seq

    def test_mirrored_soliton_reverses_transfer(self):
        n = 6
        chain = ChainSpec.uniform(n, 1.0)
        seq = mirror_sequence(build_soliton(n, 1.0).sequence)
        out = apply_sequence(ladder_minus(n, n), seq, chain)
        assert abs(out.overlap(ladder_minus(1, n)) - 1.0) < 1e-12


class TestParser:
    def test_basic_events(self):
        seq = parse_sequence("pulse all y 90\ndelay 0.5\n")
        assert seq.events == (
            HardPulse(None, "y", math.radians(90.0)),
            CouplingDelay(0.5),
        )

    def test_effpair(self):
        seq = parse_sequence("effpair 1 2 x 90\n")
        assert seq.events == (EffectivePair(1, 2, "x", math.radians(90.0)),)
        assert seq.n == 2

    def test_effpair_with_duration(self):
        seq = parse_sequence("effpair 1 2 x 90 dur=0.5\n")
        assert seq.events[0].duration == 0.5

    def test_unknown_axis_reports_line(self):
        with pytest.raises(ParseError, match="line 1") as err:
            parse_sequence("pulse 1 q 90\n")
        assert "unknown axis" in str(err.value)

    def test_unknown_directive(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_sequence("delay 0.5\nwobble 3\n")

    def test_bad_angle(self):
        with pytest.raises(ParseError, match="number"):
            parse_sequence("pulse 1 x ninety\n")

    def test_malformed_target_list(self):
        with pytest.raises(ParseError, match="malformed|integer"):
            parse_sequence("pulse 1,,3 x 90\n")

    def test_spin_out_of_declared_range(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_sequence("spins 3\npulse 4 x 90\n")

    def test_coupling_out_of_declared_range(self):
        with pytest.raises(ParseError, match="outside"):
            parse_sequence("spins 3\ndelay 0.5 only=3\n")

    def test_comments_and_blanks(self):
        text = "# a comment\n\npulse all x 45  # trailing\n"
        seq = parse_sequence(text)
        assert len(seq.events) == 1

    def test_negative_delay_rejected(self):
        with pytest.raises(ParseError, match=">= 0"):
            parse_sequence("delay -0.5\n")

    def test_targets_list(self):
        seq = parse_sequence("pulse 3,1 z -90\n")
        assert seq.events[0].targets == (1, 3)
        assert seq.n == 3

    def test_selective_delay(self):
        seq = parse_sequence("spins 5\ndelay 0.25 only=1,3\n")
        assert seq.events[0].active == (1, 3)


class TestFormat:
    def test_empty_sequence_is_empty_text(self):
        assert format_sequence(PulseSequence(0)) == ""
        assert parse_sequence("") == PulseSequence(0)

    def test_spec_lines(self):
        seq = PulseSequence(3, (
            HardPulse(None, "y", math.radians(90.0)),
            CouplingDelay(0.5, (1,)),
            EffectivePair(1, 2, "x", math.radians(90.0), 0.5),
        ))
        text = format_sequence(seq)
        assert text == (
            "spins 3\n"
            "pulse all y 90\n"
            "delay 0.5 only=1\n"
            "effpair 1 2 x 90 dur=0.5\n"
        )

    @pytest.mark.parametrize("builder", [build_soliton, build_isotropic_chain, build_inept])
    def test_builder_round_trip(self, builder):
        named = builder(4, 1.0)
        text = format_sequence(named.sequence)
        parsed = parse_sequence(text)
        assert parsed.events == named.sequence.events
        assert parsed.n == named.sequence.n
        assert format_sequence(parsed) == text

    def test_random_round_trips(self, rng):
        for _ in range(100):
            seq = random_sequence(rng, rng.randint(2, 7), rng.randint(0, 25))
            text = format_sequence(seq)
            parsed = parse_sequence(text)
            assert parsed.events == seq.events
            assert format_sequence(parsed) == text

    def test_scheduled_soliton_round_trips(self):
        from spinchain.scheduler import build_soliton_unequal

        named = build_soliton_unequal(ChainSpec((1.0, 2.0, 1.0, 0.5)))
        text = format_sequence(named.sequence)
        assert format_sequence(parse_sequence(text)) == text
