from stablefi.suites import SuiteReport, verify_nonlocal_properties, verify_orlicz_properties


def test_orlicz_suite_small():
    rep = verify_orlicz_properties(seed=1, n_triples=8)
    assert rep.passed, rep.failures()
    assert set(rep.checks) == {"norm_sandwich", "squared_identity", "indicator_identity",
                               "inverse_sandwich", "double_conjugacy"}


def test_nonlocal_suite_small():
    rep = verify_nonlocal_properties(1.5, seed=1, n_defect=3, n_oracle=2, n_hardy=4,
                                     n_lemma=2, n_cross=1)
    assert rep.passed, rep.failures()


def test_suite_report():
    rep = SuiteReport("x", {"a": {"passed": True}, "b": {"passed": False}})
    assert not rep.passed
    assert rep.failures() == ["b"]
    assert rep.to_dict()["suite"] == "x"
