import logging

from kh2.table import ALIASES, ingest_table, load_table, parse_table

TREFOIL = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)"


def test_bundled_table_is_large_and_clean():
    t = load_table()
    assert not t.errors
    knots = t.select(links=False)
    assert len(knots) >= 35
    assert len(t.select(max_crossings=7, links=True)) >= 30
    assert all(e.diagram.n_crossings <= 8 for e in t.select(max_crossings=8))


def test_aliases_resolve():
    t = load_table()
    for alias, name in ALIASES.items():
        if name in t:
            assert t[alias].pd == t[name].pd


def test_duplicate_rows_rejected():
    text = f"3_1 | 1 | {TREFOIL}\n3_1 | 1 | {TREFOIL}\n"
    t = parse_table(text)
    assert t.names() == ["3_1"]
    assert len(t.errors) == 1 and t.errors[0][0] == 2 and "duplicate" in t.errors[0][2]


def test_bad_rows_are_reported_not_fatal():
    text = "\n".join([
        "# comment",
        f"a | 1 | {TREFOIL}",
        "b | 2 | " + TREFOIL,
        "c | 1 | X(1,2,3)",
        "d | 1",
        "e | x | O",
    ])
    t = parse_table(text)
    assert t.names() == ["a"]
    assert [n for n, _, _ in t.errors] == [3, 4, 5, 6]


def test_empty_file_warns(tmp_path, caplog):
    p = tmp_path / "empty.txt"
    p.write_text("# nothing here\n\n")
    with caplog.at_level(logging.WARNING):
        t = ingest_table(p)
    assert len(t) == 0 and not t.errors
    assert "empty" in caplog.text


def test_row_with_repeated_arc_label_rejected():
    t = parse_table("bad | 1 | X(1,1,1,2) X(2,3,3,2)\n" + f"ok | 1 | {TREFOIL}\n")
    assert t.names() == ["ok"]
    assert t.errors[0][0] == 1 and t.errors[0][2]
