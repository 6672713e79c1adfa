import shutil
import pytest
from maschke_octic.exceptions import FixtureError
from maschke_octic.fixtures import FORMS, PACKAGED, load_tables, read_table

def test_packaged_tables(tables):
    assert set(tables) == set(FORMS)
    assert tables['f120'].weight == 4
    assert tables['heckeW'][17] == 14
    assert tables['W7'][7] == -7
    assert tables['Yhat'][49] == -10290
    assert list(tables['f24B'])[:3] == [7, 11, 13]
    assert 37 not in tables['f120']
    assert tables['f120'].provenance.startswith("a_p of the weight 4 newform")

def test_load_subset():
    tables = load_tables(PACKAGED, labels=['W7'])
    assert list(tables) == ['W7']
    assert len(tables['W7']) == 13

def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path

def test_malformed_rows(tmp_path):
    path = _write(tmp_path, "f24B.csv", "# test\np,coeff\n7,0\n11,four\n")
    with pytest.raises(FixtureError,match=r"f24B.csv, row 4: coefficient 'four' is not an integer") as err:
        read_table(path)
    assert err.value.status_code == 2

    path = _write(tmp_path, "dup.csv", "p,coeff\n7,0\n7,1\n")
    with pytest.raises(FixtureError,match=r"row 3: duplicate entry for 7"):
        read_table(path)

    path = _write(tmp_path, "fields.csv", "p,coeff\n7,0,1\n")
    with pytest.raises(FixtureError,match=r"row 2: expected 2 fields"):
        read_table(path)

    path = _write(tmp_path, "header.csv", "prime,value\n7,0\n")
    with pytest.raises(FixtureError,match=r"row 1: expected header"):
        read_table(path)

    path = _write(tmp_path, "empty.csv", "# nothing here\n")
    with pytest.raises(FixtureError,match=r"empty fixture table"):
        read_table(path)

    with pytest.raises(FixtureError,match=r"cannot read"):
        read_table(tmp_path / "absent.csv")

def test_blank_lines_and_label(tmp_path):
    path = _write(tmp_path, "custom.csv", "# from a test\n\nq,coeff\n49, -10290\n\n")
    table = read_table(path, label='Yhat')
    assert table.label == 'Yhat'
    assert table.weight == 4
    assert dict(table) == {49: -10290}
    assert table.provenance == "from a test"

def test_broken_directory(tmp_path):
    with pytest.raises(FixtureError,match=r"does not exist"):
        load_tables(tmp_path / "nowhere")

    with pytest.raises(FixtureError,match=r"missing fixture table f120"):
        load_tables(tmp_path)

    for label in FORMS:
        shutil.copy(PACKAGED / "{}.csv".format(label), tmp_path)
    assert load_tables(tmp_path)['f210'][37] == -2
    (tmp_path / "f210.csv").write_text("p,coeff\n11,4\n13,x\n")
    with pytest.raises(FixtureError,match=r"f210.csv, row 3"):
        load_tables(tmp_path)
