import pytest

from spanforge.catalog import (b2_lattice, gen_finset, gen_finsurj, gen_fintop, incl_fixture,
                               negative_tightness_fixture, terminal, walking_iso, z2)


@pytest.fixture(scope="session")
def finset04():
    return gen_finset(4)


@pytest.fixture(scope="session")
def finsurj12():
    return gen_finsurj([1, 2])


@pytest.fixture(scope="session")
def fintop02():
    return gen_fintop(2)


@pytest.fixture(scope="session")
def b2():
    return b2_lattice()


@pytest.fixture(scope="session")
def z2cat():
    return z2()


@pytest.fixture(scope="session")
def incl():
    return incl_fixture()


@pytest.fixture(scope="session")
def negative():
    return negative_tightness_fixture()


@pytest.fixture(scope="session")
def small_cats(finsurj12, b2, z2cat):
    return {"FINSURJ12": finsurj12, "B2": b2, "Z2": z2cat, "terminal": terminal(),
            "walking_iso": walking_iso()}


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    import importlib.util
    from pathlib import Path

    script = Path(__file__).resolve().parents[1] / "scripts" / "make_fixtures.py"
    spec = importlib.util.spec_from_file_location("make_fixtures", script)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    out = tmp_path_factory.mktemp("fixtures")
    mod.main(str(out))
    return out
