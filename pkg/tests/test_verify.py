from surfdyn.verify import SUITES, run_suites


def test_full_catalog_passes(catalog):
    checks = run_suites(catalog)
    bad = [c for c in checks if not c.ok]
    assert not bad, bad
    assert {c.suite for c in checks} == set(SUITES)


def test_corrupted_exceptional_data_names_the_identity(data_dir):
    checks = run_suites(str(data_dir / "corrupt-exceptional"), "maps")
    bad = [c for c in checks if not c.ok]
    assert bad and all("excess-intersection identity" in c.detail for c in bad)
    assert bad[0].exit_code == 2


def test_parity_violation_is_named(data_dir):
    checks = run_suites(str(data_dir / "parity"), "hilbert")
    bad = [c for c in checks if not c.ok]
    assert bad and "ParityError" in bad[0].detail


def test_corrupted_inverse_fails_adjointness(data_dir):
    checks = run_suites(str(data_dir / "corrupt-inverse"), "maps")
    bad = [c for c in checks if not c.ok]
    assert [c.name for c in bad] == ["fibration-badinv: adjointness"]


def test_scope_selection(catalog):
    checks = run_suites(catalog, "io,curves")
    assert {c.suite for c in checks} == {"io", "curves"}
