import pytest

from looijenga import checks


@pytest.mark.parametrize("name", sorted(checks.SUITES))
def test_every_suite_passes(name):
    cases = 5 if name == "orbit" else 40
    report = checks.run_suite(name, seed=11, cases=cases, threads=2)
    assert report.passed, report.failures
    assert report.cases == cases * len(checks.SUITES[name].configs)


def test_results_do_not_depend_on_thread_count():
    one = checks.run_suite("chern", seed=3, cases=30, threads=1).to_json()
    many = checks.run_suite("chern", seed=3, cases=30, threads=3).to_json()
    assert one == many


def test_failures_are_collected_and_capped(monkeypatch):
    broken = checks.Suite("broken", lambda rng, cfg: {"value": rng.randint(0, 9)}, (1, 2), "always fails")
    monkeypatch.setitem(checks.SUITES, "broken", broken)
    report = checks.run_suite("broken", seed=0, cases=8, threads=2)
    assert not report.passed
    assert report.failure_count == 16
    assert len(report.failures) == checks.MAX_REPORTED
    assert report.failures[0]["config"] == 1 and report.failures[0]["case"] == 0


def test_crashes_count_as_failures(monkeypatch):
    def crash(rng, cfg):
        raise ZeroDivisionError("boom")

    monkeypatch.setitem(checks.SUITES, "crash", checks.Suite("crash", crash, (0,), ""))
    report = checks.run_suite("crash", cases=2, threads=1)
    assert report.failure_count == 2
    assert "ZeroDivisionError" in report.failures[0]["error"]


def test_bad_arguments():
    with pytest.raises(KeyError):
        checks.run_suite("nope")
    with pytest.raises(ValueError):
        checks.run_suite("cocycle", cases=0)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("LOOIJENGA_THREADS", "3")
    assert checks.worker_count() == 3
    monkeypatch.setenv("LOOIJENGA_THREADS", "0")
    with pytest.raises(ValueError):
        checks.worker_count()
    monkeypatch.delenv("LOOIJENGA_THREADS")
    assert checks.worker_count() >= 1
