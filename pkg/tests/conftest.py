import sys

import pytest

sys.setrecursionlimit(20000)

from choreo.corpus import positive_entries
from choreo.diagnostics import Reporter
from choreo.pipeline import compile_files, compile_sources
from choreo.projector import project_program


def compile_text(text, name="test.chor"):
    checked, reporter = compile_sources([(name, text)])
    return checked, reporter


def compile_ok(text, name="test.chor"):
    checked, reporter = compile_text(text, name)
    assert not reporter.has_errors(), "\n".join(d.render() for d in reporter.errors)
    return checked


@pytest.fixture(scope="session")
def corpus_compiled():
    """name -> (CorpusProgram, CheckedProgram, LocalProgram); all must build."""
    out = {}
    for prog in positive_entries():
        checked, reporter = compile_files([prog.path])
        assert not reporter.has_errors(), (
            prog.name + ":\n" + "\n".join(d.render() for d in reporter.errors))
        units, reporter = project_program(checked, reporter)
        assert not reporter.has_errors(), (
            prog.name + ":\n" + "\n".join(d.render() for d in reporter.errors))
        out[prog.name] = (prog, checked, units)
    return out
