import shutil
from pathlib import Path

import pytest

from misinfonet import cli

FIXTURES = Path(cli.FIXTURE_DIR).parent
CORPUS = FIXTURES / "corpus"
INPUTS = FIXTURES / "inputs"
SOCIAL = FIXTURES / "social"


def run_cli(*argv) -> int:
    return cli.main([str(a) for a in argv])


def run_fixture_pipeline(out_dir: Path, seed: int = 0) -> Path:
    """curate -> crawl --fixtures -> analyze -> social into out_dir."""
    out = str(out_dir)
    assert run_cli(
        "--output-dir", out, "--seed", seed,
        "--config", INPUTS / "fixture.config",
        "curate",
        "--sources", INPUTS / "sources.csv",
        "--alexa", INPUTS / "alexa.csv",
        "--info-list", INPUTS / "info.csv",
        "--denylist", INPUTS / "denylist.txt",
    ) == 0
    assert run_cli(
        "--output-dir", out, "--seed", seed,
        "crawl", "--level", 1, "--fixtures",
        "--master-list", out_dir / "master_list.csv",
        "--run-id", "fixture-run",
    ) == 0
    assert run_cli(
        "--output-dir", out, "--seed", seed,
        "analyze",
        "--master-list", out_dir / "master_list.csv",
        "--run-id", "fixture-run",
    ) == 0
    assert run_cli(
        "--output-dir", out, "--seed", seed,
        "--config", INPUTS / "fixture.config",
        "social",
        "--records", SOCIAL / "share_records.ndjson",
        "--labels", SOCIAL / "labels.csv",
    ) == 0
    return out_dir


@pytest.fixture(scope="session")
def pipeline_out(tmp_path_factory) -> Path:
    """One shared full pipeline run over the bundled fixtures."""
    out = tmp_path_factory.mktemp("pipeline")
    return run_fixture_pipeline(out)


@pytest.fixture()
def mini_corpus(tmp_path) -> Path:
    """A throwaway copy of the bundled corpus that tests may mutate."""
    target = tmp_path / "corpus"
    shutil.copytree(CORPUS, target)
    return target
