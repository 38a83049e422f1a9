"""Command-line behaviour: exit codes, formats, env overrides, and the
watch loop."""

from __future__ import annotations

import io
import json
import threading
import time
from pathlib import Path

from livecheck.cli import build_arg_parser, main, run_watch

CORPUS = Path(__file__).parent.parent / "corpus"


def corpus_path(name: str) -> str:
    return str(CORPUS / name)


# ── exit codes ────────────────────────────────────────────────────

def test_clean_system_exits_zero(capsys):
    code = main(["check", corpus_path("pingpong.sys")])
    assert code == 0
    assert "no errors found" in capsys.readouterr().out


def test_diagnostics_exit_one(capsys):
    code = main(
        ["check", corpus_path("conf.sys"), corpus_path("conf_prime.sys"),
         "--focus", "conf'"]
    )
    out = capsys.readouterr().out
    assert code == 1
    assert out.count("[") >= 3


def test_missing_file_exits_two(capsys):
    code = main(["check", "no_such_file.sys"])
    assert code == 2
    assert "no_such_file" in capsys.readouterr().err


def test_parse_error_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.sys"
    bad.write_text("system s obj o p!m")
    code = main(["check", str(bad)])
    out = capsys.readouterr().out
    assert code == 2
    assert "[StaticError]" in out


def test_unknown_focus_exits_two(capsys):
    code = main(["check", corpus_path("pingpong.sys"), "--focus", "ghost"])
    assert code == 2
    assert "ghost" in capsys.readouterr().err


def test_focus_restricts_to_one_system(capsys):
    code = main(
        ["check", corpus_path("conf.sys"), corpus_path("conf_prime.sys"),
         "--focus", "conf"]
    )
    assert code == 0


def test_full_corpus_check(capsys):
    files = [corpus_path(n) for n in
             ("conf.sys", "conf_prime.sys", "author.sys", "pingpong.sys",
              "double_send.sys")]
    code = main(["check", *files, "--format", "json"])
    assert code == 1
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["diagnostics"]) == 9  # 3 compliance + 5 compat + 1 orphan


def test_json_format_parses_and_is_stable(capsys):
    args = ["check", corpus_path("conf.sys"), corpus_path("conf_prime.sys"),
            "--format", "json"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload["stats"]["bound"] == 4
    assert payload["stats"]["elapsedMs"] == 0


def test_color_flag_controls_ansi(capsys):
    args = ["check", corpus_path("conf.sys"), corpus_path("conf_prime.sys")]
    main([*args, "--color", "always"])
    assert "\x1b[31m" in capsys.readouterr().out
    main([*args, "--color", "never"])
    assert "\x1b[" not in capsys.readouterr().out


# ── configuration ─────────────────────────────────────────────────

def test_env_var_overrides_default_bound(monkeypatch):
    monkeypatch.setenv("LIVECHECK_BOUND", "7")
    args = build_arg_parser().parse_args(["check", "x.sys"])
    assert args.bound == 7


def test_flag_beats_env_var(monkeypatch):
    monkeypatch.setenv("LIVECHECK_BOUND", "7")
    args = build_arg_parser().parse_args(["check", "x.sys", "--bound", "2"])
    assert args.bound == 2


def test_invalid_env_var_ignored(monkeypatch, capsys):
    monkeypatch.setenv("LIVECHECK_BOUND", "many")
    args = build_arg_parser().parse_args(["check", "x.sys"])
    assert args.bound == 4


def test_config_cap_flag(tmp_path, capsys):
    looping = tmp_path / "loop.sys"
    looping.write_text(
        "system s obj A behaviour L B!m L L obj B behaviour L A?m L L"
    )
    code = main(["check", str(looping), "--config-cap", "3"])
    out = capsys.readouterr().out
    assert code == 1
    assert "stopped early" in out


# ── watch mode ────────────────────────────────────────────────────

AUTHOR_FIX = """PC?{
                  reject(str)
                     coauthor!rejected.
                  revise(str)"""


def test_watch_rechecks_on_edit(tmp_path):
    conf = tmp_path / "conf.sys"
    author = tmp_path / "author.sys"
    conf.write_text((CORPUS / "conf.sys").read_text())
    original = (CORPUS / "author.sys").read_text()
    author.write_text(original)

    args = build_arg_parser().parse_args(
        ["watch", str(conf), str(author), "--color", "never"]
    )
    out = io.StringIO()
    worker = threading.Thread(
        target=run_watch,
        args=(args,),
        kwargs={"out": out, "max_runs": 2, "poll_interval": 0.02},
    )
    worker.start()
    deadline = time.monotonic() + 5
    while (
        out.getvalue().count("[UnspecifiedReception]") < 5
        and time.monotonic() < deadline
    ):
        time.sleep(0.01)
    # handling the inner reject clears its complementary triple
    edited = original.replace("PC?{\n                  revise(str)", AUTHOR_FIX)
    assert edited != original
    author.write_text(edited)
    worker.join(timeout=10)
    assert not worker.is_alive()

    text = out.getvalue()
    assert text.count("--- run") == 2
    first_run, second_run = text.split("--- run 2")
    assert first_run.count("[UnspecifiedReception]") == 5
    assert second_run.count("[UnspecifiedReception]") == 2
    assert "reject" not in second_run.split("via:")[0].split("]")[-1]


def test_watch_reports_deleted_file(tmp_path):
    target = tmp_path / "gone.sys"
    target.write_text("system s obj o .")
    args = build_arg_parser().parse_args(["watch", str(target)])
    out = io.StringIO()
    worker = threading.Thread(
        target=run_watch,
        args=(args,),
        kwargs={"out": out, "max_runs": 2, "poll_interval": 0.02},
    )
    worker.start()
    deadline = time.monotonic() + 5
    while "no errors found" not in out.getvalue() and time.monotonic() < deadline:
        time.sleep(0.01)
    target.unlink()
    worker.join(timeout=10)
    assert not worker.is_alive()
    assert "cannot read" in out.getvalue()


def test_watch_no_output_without_edits(tmp_path):
    target = tmp_path / "still.sys"
    target.write_text("system s obj o .")
    args = build_arg_parser().parse_args(["watch", str(target)])
    out = io.StringIO()
    done = threading.Event()

    def run():
        run_watch(args, out=out, max_runs=1, poll_interval=0.02)
        done.set()

    worker = threading.Thread(target=run)
    worker.start()
    worker.join(timeout=10)
    assert done.is_set()
    assert out.getvalue().count("--- run") == 1
