from importlib import resources

import pytest
from hypothesis import given
from hypothesis import strategies as st

from amdahl_lens.errors import IntegrityError, SnapshotParseError
from amdahl_lens.ingest import (
    Epoch,
    SystemSnapshot,
    derive,
    pair_workloads,
    parse_snapshots,
    serialize_snapshots,
)
from amdahl_lens.model import efficiency

HEADER = "name,epoch,workload,cores_total,cores_used,rpeak_flops,rmax_flops\n"


@pytest.fixture(scope="module")
def fixture_records():
    text = resources.files("amdahl_lens").joinpath("data/top500_fixture.csv").read_text()
    return [derive(s) for s in parse_snapshots(text)]


def _find(records, name, workload):
    return next(r for r in records if r.snapshot.name == name and r.snapshot.workload == workload)


class TestParse:
    def test_three_rows(self):
        text = HEADER + "A,2020-06,HPL,10,10,100,50\nB,2020-06,hpcg,10,10,100,5\n\nC,2020-11,hpl-ai,4,2,8,1\n"
        snaps = parse_snapshots(text)
        assert [s.name for s in snaps] == ["A", "B", "C"]
        assert snaps[1].workload == "HPCG" and snaps[2].workload == "HPL-AI"
        assert snaps[2].epoch == Epoch(2020, 11)

    def test_unknown_workload_kept_as_text(self):
        (s,) = parse_snapshots(HEADER + "A,2020-06,Graph500,10,10,100,50\n")
        assert s.workload == "Graph500"

    def test_rmax_above_rpeak(self):
        with pytest.raises(IntegrityError, match="line 2: Bad"):
            parse_snapshots(HEADER + "Bad,2020-06,HPL,10,10,100,150\n")

    def test_cores_used_above_total(self):
        with pytest.raises(IntegrityError, match="cores_used"):
            parse_snapshots(HEADER + "A,2020-06,HPL,10,11,100,50\n")

    def test_missing_field_names_row_and_column(self):
        with pytest.raises(SnapshotParseError) as info:
            parse_snapshots(HEADER + "A,2020-06,HPL,10,10,100,50\nB,2020-06,HPL,,10,100,50\n")
        assert (info.value.line, info.value.column) == (3, 4)
        assert "line 3, column 4" in str(info.value)

    def test_bad_number(self):
        with pytest.raises(SnapshotParseError, match="rmax_flops"):
            parse_snapshots(HEADER + "A,2020-06,HPL,10,10,100,lots\n")

    def test_fractional_core_count(self):
        with pytest.raises(SnapshotParseError, match="cores_total"):
            parse_snapshots(HEADER + "A,2020-06,HPL,10.5,10,100,50\n")

    def test_bad_epoch(self):
        with pytest.raises(SnapshotParseError, match="epoch"):
            parse_snapshots(HEADER + "A,June 2020,HPL,10,10,100,50\n")

    def test_missing_column(self):
        with pytest.raises(SnapshotParseError, match="rmax_flops"):
            parse_snapshots("name,epoch,workload,cores_total,cores_used,rpeak_flops\n")

    def test_malformed_quoting(self):
        with pytest.raises(SnapshotParseError) as info:
            parse_snapshots(HEADER + 'A,2020-06,HPL,10,10,100,"5"0\n')
        assert info.value.line == 2

    def test_empty(self):
        with pytest.raises(SnapshotParseError):
            parse_snapshots("")


class TestDerive:
    def test_full_machine_hpl_has_no_correction(self, fixture_records):
        rec = _find(fixture_records, "Fugaku", "HPL")
        assert rec.corrected_efficiency is None

    def test_fugaku(self, fixture_records):
        rec = _find(fixture_records, "Fugaku", "HPL")
        assert rec.efficiency == pytest.approx(0.808, abs=1e-3)
        assert rec.alpha.one_minus_alpha == pytest.approx(3.25e-8, rel=0.02)

    def test_summit(self, fixture_records):
        rec = _find(fixture_records, "Summit", "HPL")
        assert rec.alpha.one_minus_alpha == pytest.approx(14.7e-8, rel=0.02)

    def test_hpcg_partial_machine(self):
        s = SystemSnapshot("X", Epoch(2020, 6), "HPCG", 1000, 100, 1e15, 3e13)
        rec = derive(s)
        assert rec.corrected_efficiency == pytest.approx(10 * rec.efficiency, rel=1e-15)
        assert rec.notes

    def test_hpcg_full_machine_is_identity(self, fixture_records):
        assert _find(fixture_records, "Summit", "HPCG").corrected_efficiency is None

    def test_single_core_kept_without_alpha(self):
        rec = derive(SystemSnapshot("X", Epoch(2020, 6), "HPL", 1, 1, 1e9, 5e8))
        assert rec.alpha is None
        assert rec.efficiency == 0.5
        assert rec.notes

    def test_alpha_reproduces_efficiency(self, fixture_records):
        for rec in fixture_records:
            n = rec.snapshot.cores_used
            assert efficiency(rec.alpha, n) == pytest.approx(rec.snapshot.r_max / rec.snapshot.r_peak, rel=1e-9)


class TestPairing:
    def test_fixture_ratios(self, fixture_records):
        pairing = pair_workloads(fixture_records)
        ratios = {p.name: p.measurement.perf_ratio for p in pairing.pairs}
        assert ratios["Fugaku"] == pytest.approx(3.42, rel=0.01)
        assert ratios["Summit"] == pytest.approx(3.01, rel=0.01)
        assert all(p.ratio_source == "computed" for p in pairing.pairs)
        assert pairing.unmatched == []

    def test_identical_rmax(self):
        snaps = parse_snapshots(HEADER + "A,2020-06,HPL,10,10,100,50\nA,2020-06,HPL-AI,10,10,400,50\n")
        (pair,) = pair_workloads([derive(s) for s in snaps]).pairs
        assert pair.measurement.perf_ratio == 1.0

    def test_ratio_column_wins(self):
        text = HEADER.strip() + ",perf_ratio\nA,2020-06,HPL,10,10,100,50,\nA,2020-06,HPL-AI,10,10,400,150,3.42\n"
        (pair,) = pair_workloads([derive(s) for s in parse_snapshots(text)]).pairs
        assert pair.measurement.perf_ratio == 3.42 and pair.ratio_source == "input"

    def test_unmatched_reported(self):
        snaps = parse_snapshots(HEADER + "A,2020-06,HPL,10,10,100,50\nA,2020-11,HPL-AI,10,10,400,150\n")
        pairing = pair_workloads([derive(s) for s in snaps])
        assert pairing.pairs == []
        assert len(pairing.unmatched) == 2


def test_fixture_round_trip():
    text = resources.files("amdahl_lens").joinpath("data/top500_fixture.csv").read_text()
    snaps = parse_snapshots(text)
    assert parse_snapshots(serialize_snapshots(snaps)) == snaps


names = st.text(st.characters(blacklist_categories=("Cs", "Cc")), min_size=1, max_size=20).filter(str.strip)


@st.composite
def snapshots(draw):
    total = draw(st.integers(1, 10**8))
    used = draw(st.integers(1, total))
    peak = draw(st.floats(1e3, 1e19))
    rmax = draw(st.floats(1e-3, 1.0)) * peak
    return SystemSnapshot(
        draw(names).strip(), Epoch(draw(st.integers(1993, 2100)), draw(st.integers(1, 12))),
        draw(st.sampled_from(["HPL", "HPCG", "HPL-AI", "FP0"])), total, used, peak, rmax,
        draw(st.none() | st.floats(1e6, 5e9)), draw(st.none() | st.floats(1, 4)),
    )


@given(st.lists(snapshots(), min_size=1, max_size=8))
def test_round_trip_property(snaps):
    assert parse_snapshots(serialize_snapshots(snaps)) == snaps
