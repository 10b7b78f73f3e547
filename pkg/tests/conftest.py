import pytest

from isoas.lexicon import AgreementTable, default_lexicon, default_ontology

FIXTURE_CSV = (
    "id,name,kind,description,value\n"
    "1,spec,document,master spec,3\n"
    "2,drawing,cad,axle drawing,7\n"
    "3,manual,document,user manual,9\n"
)

TEN_ROW_CSV = "id,name,kind,description,value\n" + "".join(
    f"{i},item{i},{kind},{desc},{i * 2}\n"
    for i, (kind, desc) in enumerate(
        [
            ("document", "alpha file"),
            ("cad", "bravo drawing"),
            ("document", "charlie file"),
            ("music", "delta song"),
            ("cad", "echo drawing"),
            ("news", "foxtrot item"),
            ("document", "golf file"),
            ("music", "hotel song"),
            ("cad", "india drawing"),
            ("news", "juliet item"),
        ],
        start=1,
    )
)


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def ontology():
    return default_ontology()


@pytest.fixture(scope="session")
def agreement(ontology):
    return AgreementTable.from_ontology(ontology)


@pytest.fixture
def repo(tmp_path):
    from isoas.repository import Repository

    return Repository(tmp_path / "home")


@pytest.fixture
def engine(tmp_path):
    from isoas.engine import Engine

    eng = Engine(tmp_path / "home")
    eng.repo.ingest("main", FIXTURE_CSV)
    return eng
