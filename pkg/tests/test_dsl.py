import filecmp
import pathlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfakit.dsl import SpecError, diagnose, format_spec, parse_spec, run_source

ROOT = pathlib.Path(__file__).resolve().parents[1]
SPECS = sorted((ROOT / "specs").glob("*.gfa"))
GOLDEN = ROOT / "tests" / "golden"


@pytest.fixture(autouse=True)
def _default_budget(monkeypatch):
    monkeypatch.delenv("GFA_NMAX", raising=False)


def _messages(src):
    _, diags = diagnose(src)
    return [d.message for d in diags]


# -- parsing and diagnostics ------------------------------------------------

@pytest.mark.parametrize("path", SPECS, ids=lambda p: p.stem)
def test_bundled_specs_parse_cleanly(path):
    spec, diags = diagnose(path.read_text())
    assert spec is not None and diags == []
    assert spec.tasks


@pytest.mark.parametrize("path", SPECS, ids=lambda p: p.stem)
def test_printer_round_trip(path):
    spec = parse_spec(path.read_text())
    text = format_spec(spec)
    again = parse_spec(text)
    assert again == spec
    assert format_spec(again) == text


def test_typo_gets_a_suggestion():
    src = 'seq f = "n";\nscale r = log;\ntask clasify f r;\n'
    _, diags = diagnose(src)
    (d,) = diags
    assert d.message == "unknown task kind clasify" and d.suggestion == "classify"
    assert (d.span.line, d.span.col, d.span.length) == (3, 6, 7)
    rendered = d.render(src, "t.gfa")
    assert rendered.startswith("t.gfa:3:6: error: unknown task kind clasify (did you mean classify?)")
    assert "^^^^^^^" in rendered


def test_all_errors_are_collected():
    msgs = _messages('seq f = "n";\nscale r = power 0;\ntask classify g r;\n')
    assert msgs == ["power scale parameter must be positive", "unknown name g"]


@pytest.mark.parametrize("src, expected", [
    ('seq f = "n";\nseq f = "n^2";\n', "duplicate name f"),
    ('seq f = "n"\nscale r = log;\n', "expected ';', found 'scale'"),
    ('seq f = "n";\nscale r = log;\ntask classify f r mu=99;\n', "mu must lie in 1..8"),
    ('seq f = "n";\nscale r = log;\ntask classify f r nmax=5;\n', "nmax"),
    ('scale r = egorov 1.5;\n', "egorov"),
    ('mollifier m = boxcar;\n', "boxcar"),
    ('seq f = "n +";\n', "bad expression"),
    ('seq f = "n";\nscale r = log;\ntask distance f r;\n', "task distance takes"),
])
def test_specific_diagnostics(src, expected):
    msgs = _messages(src)
    assert any(expected in m for m in msgs), msgs


def test_parse_spec_raises_with_all_diagnostics():
    with pytest.raises(SpecError) as exc:
        parse_spec("task classify a b;\n")
    assert len(exc.value.diagnostics) == 2


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(SPECS), st.data())
def test_mutated_specs_never_crash(path, data):
    src = path.read_text()
    i = data.draw(st.integers(0, len(src)))
    j = data.draw(st.integers(i, min(len(src), i + 6)))
    junk = data.draw(st.text(alphabet='abcxyz019 ;=,[]{}()"+-*#\n', max_size=4))
    mutated = src[:i] + junk + src[j:]
    spec, diags = diagnose(mutated)
    assert (spec is None) == any(d.severity == "error" for d in diags)
    for d in diags:
        assert 0 <= d.span.offset <= len(mutated)
        assert d.span.offset + d.span.length <= len(mutated) + 1
        assert d.span.line >= 1 and d.span.col >= 1
        d.render(mutated, "m.gfa")


# -- running ------------------------------------------------------------------

@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    out = {}
    for path in SPECS:
        d = tmp_path_factory.mktemp(path.stem)
        code, results = run_source(path.read_text(), d)
        out[path.stem] = (d, code, results)
    return out


def _same_tree(a, b):
    names_a = sorted(p.name for p in a.iterdir())
    names_b = sorted(p.name for p in b.iterdir())
    assert names_a == names_b
    match, mismatch, errors = filecmp.cmpfiles(a, b, names_a, shallow=False)
    assert not mismatch and not errors, mismatch


@pytest.mark.parametrize("path", SPECS, ids=lambda p: p.stem)
def test_outputs_match_golden_files(runs, path):
    d, code, _ = runs[path.stem]
    assert code == 0
    _same_tree(d, GOLDEN / path.stem)


@pytest.mark.parametrize("name", ["basics", "props"])
def test_parallel_rerun_is_byte_identical(runs, tmp_path, name):
    code, _ = run_source((ROOT / "specs" / f"{name}.gfa").read_text(), tmp_path, parallel=True)
    assert code == 0
    _same_tree(runs[name][0], tmp_path)


def test_basics_verdicts(runs):
    _, _, results = runs["basics"]
    assert [r.verdict for r in results] == [
        "Moderate", "Divergent", "Negligible", "1", "e^3", "0", "Equal", "NotEqual", "Moderate"]


def test_csv_header_and_summary(runs):
    d = runs["basics"][0]
    lines = (d / "summary.csv").read_text().splitlines()
    assert lines[0] == "# gfa-kit v1"
    assert lines[1] == "task,kind,target,verdict,status,detail,file"
    assert len(lines) == 2 + 9


def test_exit_codes(tmp_path):
    inconclusive = 'seq f = "exp(log(n)*(2+sin(log(n))))";\nscale r = log;\ntask classify f r;\n'
    code, res = run_source(inconclusive, tmp_path / "a")
    assert code == 2 and res[0].status == "inconclusive"
    error = 'seq f = "x*n";\nseminorm a = abs;\nscale r = log;\ntask classify f r seminorm=a;\n'
    code, res = run_source(error, tmp_path / "b")
    assert code == 1 and res[0].status == "error"
    assert "TypeError" in res[0].detail


def test_same_seed_same_bytes(tmp_path):
    src = "task verify-properties suite=ultrametric count=30 seed=7;\n"
    run_source(src, tmp_path / "a")
    run_source(src, tmp_path / "b")
    _same_tree(tmp_path / "a", tmp_path / "b")
