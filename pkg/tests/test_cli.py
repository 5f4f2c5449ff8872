import subprocess
import sys

import pytest

from fixtures import CODE_13_26, graph
from linenc.cli import main
from linenc.io import write_alist, write_dense


@pytest.fixture
def code_files(tmp_path):
    g = graph(CODE_13_26)
    alist = tmp_path / "code.alist"
    alist.write_text(write_alist(g))
    dense = tmp_path / "code.txt"
    dense.write_text(write_dense(g))
    return tmp_path, alist, dense


def test_info(code_files, capsys):
    _, alist, _ = code_files
    assert main(["info", str(alist)]) == 0
    out = capsys.readouterr().out
    assert "n=26 M=13 rank=13" in out
    assert "bit degrees   3:26" in out
    assert "components=1" in out


def test_preprocess_reports_two_stopping_sets(code_files, capsys):
    tmp, alist, _ = code_files
    assert main(["preprocess", str(alist), "-o", str(tmp / "s.bin")]) == 0
    out = capsys.readouterr().out
    assert "2 stopping sets" in out
    assert "xor_budget: 130" in out
    assert (tmp / "s.bin").stat().st_size > 0


def test_encode_verify_cycle(code_files, capsys):
    tmp, alist, dense = code_files
    sched = tmp / "s.bin"
    main(["preprocess", str(alist), "-o", str(sched), "--mode", "recompute"])
    capsys.readouterr()
    assert main(["encode", str(sched), "--random", "5", "--seed", "3", "--stats"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 5 and all(" xors=" in ln for ln in lines)
    words = tmp / "cw.txt"
    words.write_text("".join(ln.split()[0] + "\n" for ln in lines))
    assert main(["verify", str(dense), str(words)]) == 0
    assert "5/5 codewords valid" in capsys.readouterr().out
    # flip one bit of the first word
    first = lines[0].split()[0]
    mutated = format(int(first[0], 16) ^ 0x8, "x") + first[1:]
    words.write_text(mutated + "\n")
    assert main(["verify", str(dense), str(words)]) == 1


def test_encode_zero_word(code_files, capsys):
    tmp, alist, _ = code_files
    sched = tmp / "s.bin"
    main(["preprocess", str(alist), "-o", str(sched)])
    (tmp / "in.txt").write_text("0000\n")
    capsys.readouterr()
    assert main(["encode", str(sched), "--in", str(tmp / "in.txt")]) == 0
    assert capsys.readouterr().out == "0000000\n"


def test_format_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.alist"
    bad.write_text("3 2\n2 2\n")
    assert main(["info", str(bad)]) == 2
    assert "line" in capsys.readouterr().err


def test_bench(code_files, capsys):
    _, alist, _ = code_files
    assert main(["bench", str(alist), "--words", "300", "--threads", "2"]) == 0
    out = capsys.readouterr().out
    assert "mean xor_count=" in out and "bound=130" in out


def test_console_entry_point(code_files):
    _, alist, _ = code_files
    r = subprocess.run([sys.executable, "-m", "linenc.cli", "info", str(alist)], capture_output=True, text=True)
    assert r.returncode == 0 and "rank=13" in r.stdout
