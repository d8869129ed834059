#!/usr/bin/env python3
"""Smoke test for the jto_py extension module.

Builds nothing itself: run `cargo build --release -p jto-py` first, then
`python3 python/smoke_test.py`. The script locates the compiled cdylib in
the target directory and imports it in place.
"""

import pathlib
import shutil
import sys
import tempfile


def locate_module() -> pathlib.Path:
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libjto_py.so", "jto_py.so", "libjto_py.dylib", "jto_py.pyd")
    ]
    for c in candidates:
        if c.exists():
            return c
    sys.exit("build the module first: cargo build --release -p jto-py")


def main() -> None:
    lib = locate_module()
    staging = pathlib.Path(tempfile.mkdtemp(prefix="jto_py_"))
    shutil.copy(lib, staging / "jto_py.so")
    sys.path.insert(0, str(staging))
    import jto_py

    # Parsing and desugaring.
    f = jto_py.parse("[t]_1 p -> p")
    assert f.pretty() == "[t]_1 p -> p"
    assert f.core().is_core()
    g = jto_py.parse("P[a]_0 pay")
    assert "O[a]_0" in g.core().pretty()
    assert jto_py.time_literal(2).pretty() == "time=2"
    proj = jto_py.parse("O[a]_0 pay").forgetful_projection()
    assert proj.pretty() == "O_0 pay"

    # Bounded search: a plain eventuality is satisfiable, a contradiction
    # is not.
    assert jto_py.search(["F q"]).startswith("SAT")
    assert jto_py.search(["p", "~p"]).startswith("UNSAT")

    # Proof checking through the script format.
    script = "\n".join(
        [
            "jtopf 1",
            "name tiny",
            "hyp 0 p",
            "hyp 1 p -> q",
            "goal {0,1} q",
            "1 | {0} | p | hyp",
            "2 | {1} | p -> q | hyp",
            "3 | {0,1} | q | mp 1 2",
        ]
    )
    accepted, diags = jto_py.check_proof(script)
    assert accepted, diags
    bad = script.replace("| q | mp 1 2", "| r | mp 1 2")
    accepted, diags = jto_py.check_proof(bad)
    assert not accepted and diags

    # The corpus end to end.
    names = jto_py.corpus_cases()
    assert "arguments-v1" in names and "non-validity" in names
    for name in names:
        rows = jto_py.corpus_run(name)
        assert rows and all(ok for (_, _, _, ok) in rows), (name, rows)

    # A model straight from its text format.
    model = jto_py.Model(
        "\n".join(
            [
                "jtom 1",
                "kind neighborhood",
                "name two-state",
                "agents i",
                "states w v",
                "run stem w loop v",
                "val v p",
                "nbr 0 * any = {*}",
                "nbro 0 * any = {*}",
            ]
        )
    )
    assert model.kind() == "neighborhood"
    assert model.check("X p", 0, 0)
    assert not model.check("p", 0, 0)
    assert model.validate(["p | ~p"]) == []

    print("jto_py", jto_py.__version__, "smoke test: ok")


if __name__ == "__main__":
    main()
