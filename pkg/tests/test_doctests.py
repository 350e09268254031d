import doctest
import importlib

import pytest

MODULES = ["exactring", "coxeter", "twistinv", "hecke", "invmod", "verify", "linalg", "cache", "cli"]


@pytest.mark.parametrize("name", MODULES)
def test_module_doctests(name):
    mod = importlib.import_module(f"involmod.{name}")
    result = doctest.testmod(mod)
    assert result.failed == 0
