import io
import json
import subprocess
import sys

import pytest

from rhetsum.cli import RunOptions, main, prompt_tie, run_summarize
from rhetsum.document_model import MediaType
from rhetsum.tiebreak import InteractionError, TieCandidate


def candidates(*ids):
    return [TieCandidate(u, MediaType.TEXT, 10.0, 0.5, ()) for u in ids]


def scripted(*answers):
    it = iter(answers)

    def read(_prompt):
        try:
            return next(it)
        except StopIteration:
            raise EOFError from None

    return read


# --- prompt_tie -------------------------------------------------------------


def test_prompt_reverse():
    out = io.StringIO()
    assert prompt_tie(["a", "b"], candidates("a", "b"), scripted("2 1"), out) == ["b", "a"]
    assert "1) a [text, 10 s, w=0.5]" in out.getvalue()


def test_prompt_accepts_third_attempt():
    out = io.StringIO()
    got = prompt_tie(["a", "b"], candidates("a", "b"), scripted("1 1", "1 1", "1 2"), out)
    assert got == ["a", "b"]
    assert out.getvalue().count("expected a permutation") == 2


def test_prompt_gives_up_after_three():
    with pytest.raises(InteractionError):
        prompt_tie(["a", "b"], candidates("a", "b"), scripted("x", "3 1", ""), io.StringIO())


def test_prompt_eof():
    with pytest.raises(InteractionError):
        prompt_tie(["a", "b"], candidates("a", "b"), scripted(), io.StringIO())


# --- run_summarize ----------------------------------------------------------


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def unit(uid, media="text", duration=10):
    return {"id": uid, "kind": "esu", "media": media, "duration_s": duration}


def ns(n, s, rel_type="Elaboration"):
    return {"category": "nucleus_satellite", "rel_type": rel_type, "nucleus": n, "satellite": s}


def run(opts):
    err = io.StringIO()
    return run_summarize(opts, err), err.getvalue()


def test_space_pre_weighted(space_doc_path, tmp_path):
    opts = RunOptions(
        space_doc_path,
        600,
        out_path=tmp_path / "m.json",
        markdown_path=tmp_path / "s.md",
        dot_path=tmp_path / "g.dot",
        pre_weighted=True,
    )
    code, err = run(opts)
    assert (code, err) == (0, "")
    data = json.loads((tmp_path / "m.json").read_text())
    assert [e["id"] for e in data["entries"]] == [
        "Space Race",
        "Moon Landing",
        "International Space Station",
    ]
    assert data["total_duration_s"] == 600
    assert (tmp_path / "s.md").read_text().startswith("# ")
    assert (tmp_path / "g.dot").read_text().startswith("digraph")


def test_default_output_path(space_doc_path, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(RunOptions(space_doc_path, 600))[0] == 0
    assert (tmp_path / "space_exploration.summary.json").exists()


def test_cycle_exits_1(tmp_path):
    doc = write_json(
        tmp_path / "cyc.json",
        {"title": "t", "root": "r", "units": [unit("r"), unit("a"), unit("b")],
         "relations": [ns("r", "a"), ns("a", "b"), ns("b", "a")]},
    )
    out = tmp_path / "out.json"
    code, err = run(RunOptions(doc, 60, out_path=out))
    assert code == 1
    assert f"{doc}: cycle: a:" in err
    assert not out.exists()


def test_ecu_without_main_exits_1(tmp_path):
    doc = write_json(
        tmp_path / "ecu.json",
        {"title": "t", "root": "r", "units": [unit("r"), {"id": "e", "kind": "ecu", "members": ["r"]}]},
    )
    code, err = run(RunOptions(doc, 60, out_path=tmp_path / "o.json"))
    assert code == 1 and "ecu_main: e:" in err


def test_unknown_rel_type_without_default_exits_2(tmp_path):
    doc = write_json(
        tmp_path / "d.json",
        {"title": "t", "root": "r", "units": [unit("r"), unit("s")], "relations": [ns("r", "s", "Summary")]},
    )
    cfg = write_json(tmp_path / "w.json", {"default_coefficient": None})
    out = tmp_path / "o.json"
    code, err = run(RunOptions(doc, 60, out_path=out, config_path=cfg))
    assert code == 2 and "Summary" in err
    assert not out.exists()


@pytest.mark.parametrize(
    "name, content, expected",
    [
        ("missing.json", None, 1),
        ("broken.json", "{", 1),
        ("schema.json", '{"title": 1}', 1),
    ],
)
def test_bad_document_inputs(tmp_path, name, content, expected):
    path = tmp_path / name
    if content is not None:
        path.write_text(content)
    code, err = run(RunOptions(path, 60, out_path=tmp_path / "o.json"))
    assert code == expected and str(path) in err


def test_bad_config_exits_2(space_doc_path, tmp_path):
    cfg = tmp_path / "w.json"
    cfg.write_text('{"base_value": -1}')
    assert run(RunOptions(space_doc_path, 60, config_path=cfg, out_path=tmp_path / "o.json"))[0] == 2
    assert run(RunOptions(space_doc_path, 60, config_path=tmp_path / "nope.json"))[0] == 2


def test_bad_profile_exits_1(space_doc_path, tmp_path):
    prof = write_json(tmp_path / "p.json", {"media_hierarchy": ["text", "text", "image", "video"]})
    assert run(RunOptions(space_doc_path, 60, profile_path=prof, out_path=tmp_path / "o.json"))[0] == 1


def test_missing_presets_exit_1(tmp_path):
    doc = write_json(tmp_path / "d.json", {"title": "t", "root": "r", "units": [unit("r")]})
    code, err = run(RunOptions(doc, 60, out_path=tmp_path / "o.json", pre_weighted=True))
    assert code == 1 and "preset_weight" in err


def test_reproducible(space_doc_path, tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        opts = RunOptions(
            space_doc_path, 500, out_path=d / "m.json", markdown_path=d / "s.md", dot_path=d / "g.dot"
        )
        assert run(opts)[0] == 0
        outs.append([(d / f).read_bytes() for f in ("m.json", "s.md", "g.dot")])
    assert outs[0] == outs[1]


def test_time_must_be_positive(space_doc_path):
    with pytest.raises(SystemExit) as info:
        main(["--doc", str(space_doc_path), "--time", "0"])
    assert info.value.code == 2


# --- interactive, through the real entry point -------------------------------


@pytest.fixture
def tied_doc(tmp_path):
    return write_json(
        tmp_path / "tied.json",
        {"title": "t", "root": "r", "units": [unit("r"), unit("t1"), unit("t2")],
         "relations": [ns("r", "t1"), ns("r", "t2")]},
    )


def cli(*args, stdin=""):
    return subprocess.run(
        [sys.executable, "-m", "rhetsum", *args], input=stdin, capture_output=True, text=True, timeout=60
    )


def test_interactive_answer_is_used(tied_doc, tmp_path):
    out = tmp_path / "m.json"
    proc = cli("--doc", str(tied_doc), "--time", "100", "--out", str(out), "--interactive", stdin="2 1\n")
    assert proc.returncode == 0, proc.stderr
    [decision] = json.loads(out.read_text())["tie_decisions"]
    assert decision["method"] == "user_intervention"
    assert decision["chosen_order"] == ["t2", "t1"]


def test_interactive_failure_falls_back(tied_doc, tmp_path):
    out = tmp_path / "m.json"
    proc = cli("--doc", str(tied_doc), "--time", "100", "--out", str(out), "--interactive")
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["tie_decisions"][0]["method"] == "document_order_fallback"


def test_strict_interactive_failure_exits_3(tied_doc, tmp_path):
    out, md = tmp_path / "m.json", tmp_path / "s.md"
    proc = cli(
        "--doc", str(tied_doc), "--time", "100", "--out", str(out), "--markdown", str(md),
        "--strict-interactive", stdin="nope\n1 1\n\n",
    )
    assert proc.returncode == 3
    assert "interaction failed" in proc.stderr
    assert not out.exists() and not md.exists()
    assert list(tmp_path.iterdir()) == [tied_doc]
