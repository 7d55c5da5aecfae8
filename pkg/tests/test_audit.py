from ladder4.audit import build_ledger, format_ledger, gated, ledger_ok


def test_ledger_has_no_unresolved_gated_entries():
    entries = build_ledger()
    assert ledger_ok(entries)
    keys = {e.key for e in entries}
    assert {"order1-rho13", "order1-rho23", "order1-rho14", "order2-rho44", "weak-probe-source-sign"} <= keys


def test_ledger_records_literal_failures():
    entries = {e.key: e for e in build_ledger()}
    for key in ("order1-rho13", "order1-rho23", "order1-rho14", "order2-rho22", "order2-lower-denominator"):
        assert not entries[key].literal_ok
        assert entries[key].resolved
    assert entries["order1-rho24"].literal_ok
    assert not gated(entries["resonance-limit-bare"])


def test_format_lists_every_entry():
    entries = build_ledger()
    text = format_ledger(entries)
    for e in entries:
        assert e.key in text
