import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

import pytest

from owlforge.cli import main
from owlforge.fetch import AuthError, fetch
from owlforge.manchester import parse, serialize


FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_fixture_files_match_their_templates():
    from owlforge.antipattern import AntiPatternId, fixture_file_name, minimal_fixture

    for pattern in AntiPatternId:
        on_disk = (FIXTURES / fixture_file_name(pattern)).read_text()
        assert on_disk == serialize(minimal_fixture(pattern)), pattern


def test_check_eid_fixture(capsys):
    code, out, _ = run_cli(capsys, "check", str(FIXTURES / "eid.omn"))
    assert code == 0
    payload = json.loads(out)
    assert payload["status"] == "incoherent"
    assert payload["unsat_classes"] == ["c1", "c2"]
    assert payload["schema"] == "owlforge/check/v1"
    assert "wall_time_ms" in payload


def test_check_inconsistent_fixture_has_trace(capsys):
    code, out, _ = run_cli(capsys, "check", str(FIXTURES / "ood.omn"))
    payload = json.loads(out)
    assert code == 0
    assert payload["status"] == "inconsistent"
    assert payload["clash_trace"]


def test_unknown_flag_exits_two():
    with pytest.raises(SystemExit) as err:
        main(["check", "--bogus"])
    assert err.value.code == 2


def test_missing_file_is_domain_error(capsys):
    code, _, err = run_cli(capsys, "check", "/nonexistent/file.omn")
    assert code == 1
    assert "error" in err


def test_inject_subcommand(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "inject",
        str(FIXTURES / "oil.omn"),
        "--pattern",
        "UE",
        "--seed",
        "3",
        "--out-dir",
        str(tmp_path),
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["pattern"] == "UE"
    assert 1 <= len(payload["injected_axioms"]) <= 2
    produced = Path(payload["output_file"])
    assert produced.exists()
    parse(produced.read_text())  # the emitted module is well-formed


def test_gen_and_modularize_and_translate(tmp_path, capsys):
    out_dir = tmp_path / "modules"
    code, out, _ = run_cli(
        capsys, "gen", "--n", "2", "--seed", "5", "--out", str(out_dir),
        "--classes", "20", "24",
    )
    assert code == 0
    files = sorted(out_dir.glob("*.omn"))
    assert len(files) == 2

    mod_dir = tmp_path / "mods"
    code, out, _ = run_cli(
        capsys, "modularize", str(files[0]), "--k", "2", "--out", str(mod_dir)
    )
    assert code == 0
    manifest = json.loads(out)
    assert manifest["source"] == files[0].stem
    assert len(manifest["modules"]) == 2
    assert "dropped_axioms" in manifest

    jsonl = tmp_path / "triples.jsonl"
    levi = tmp_path / "levi"
    code, out, _ = run_cli(
        capsys, "translate", str(out_dir), "--out", str(jsonl), "--levi", str(levi)
    )
    assert code == 0
    lines = [json.loads(l) for l in jsonl.read_text().splitlines()]
    assert len(lines) == 2
    assert all({"id", "triples", "text", "tokens", "label", "pattern"} <= set(l) for l in lines)
    assert len(list(levi.glob("*.levi.json"))) == 2


def test_embed_subcommand(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "embed",
        str(FIXTURES / "ue.omn"),
        "--dim", "8", "--epochs", "2", "--walks", "2", "--depth", "2",
        "--out", str(tmp_path / "table.bin"),
        "--jsonl", str(tmp_path / "table.jsonl"),
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["dim"] == 8
    assert (tmp_path / "table.bin").exists()
    from owlforge.embed import load_table

    table = load_table(str(tmp_path / "table.bin"))
    assert table.dim == 8


def test_pipeline_reruns_are_byte_identical(tmp_path, capsys):
    args = ["pipeline", "--seed", "13", "--n", "8", "--out"]
    code, _, _ = run_cli(capsys, *args, str(tmp_path / "a"), "--embed-dim", "8",
                         "--embed-epochs", "2", "--walks", "2", "--depth", "2")
    assert code == 0
    code, _, _ = run_cli(capsys, *args, str(tmp_path / "a2"), "--embed-dim", "8",
                         "--embed-epochs", "2", "--walks", "2", "--depth", "2")
    assert code == 0
    first = (tmp_path / "a" / "dataset.jsonl").read_bytes()
    second = (tmp_path / "a2" / "dataset.jsonl").read_bytes()
    assert first == second
    assert (tmp_path / "a" / "splits" / "base.json").read_bytes() == (
        tmp_path / "a2" / "splits" / "base.json"
    ).read_bytes()
    names = {p.name for p in (tmp_path / "a" / "splits").glob("*.json")}
    assert names == {
        "base.json",
        "loo_aio.json",
        "loo_eid.json",
        "loo_oilstar.json",
        "loo_uestar.json",
        "loo_sosineto.json",
        "loo_oostar.json",
        "loo_csc.json",
    }


def test_build_dataset_and_eval_round_trip(tmp_path, capsys):
    from owlforge.translate import Triple, TripleDoc, doc_to_json_dict

    cons = tmp_path / "cons.jsonl"
    incons = tmp_path / "incons.jsonl"
    with open(cons, "w") as fh:
        for i in range(6):
            doc = TripleDoc(f"c{i}", (Triple("a", "is a", "class"),), 5, "consistent", None)
            fh.write(json.dumps(doc_to_json_dict(doc) | {"status": "consistent"}) + "\n")
    with open(incons, "w") as fh:
        for i in range(6):
            doc = TripleDoc(f"i{i}", (Triple("a", "is a", "class"),), 5, "inconsistent", "EID")
            fh.write(json.dumps(doc_to_json_dict(doc) | {"status": "incoherent"}) + "\n")

    dataset = tmp_path / "dataset.jsonl"
    code, out, _ = run_cli(
        capsys,
        "build-dataset",
        "--consistent", str(cons),
        "--inconsistent", str(incons),
        "--out", str(dataset),
        "--split-dir", str(tmp_path / "splits"),
        "--leave-family-out",
    )
    assert code == 0
    meta = json.loads(out)
    assert meta["consistent"] == meta["inconsistent"] == 6

    predictions = tmp_path / "preds.jsonl"
    with open(predictions, "w") as fh:
        for line in dataset.read_text().splitlines():
            record = json.loads(line)
            fh.write(json.dumps({"id": record["id"], "pred": record["label"], "score": 0.9}) + "\n")
    code, out, _ = run_cli(
        capsys, "eval", "--dataset", str(dataset), "--predictions", str(predictions)
    )
    assert code == 0
    metrics = json.loads(out)
    assert metrics["accuracy"] == 1.0
    assert metrics["tp"] == 6 and metrics["tn"] == 6


# ---------------------------------------------------------------------------
# fetch against a local stub server
# ---------------------------------------------------------------------------

ONTOLOGY_BODIES = {
    "alpha": "Class: A\n",
    "beta": "Class: B\n    SubClassOf: A\nClass: A\n",
}


class _StubHandler(BaseHTTPRequestHandler):
    requests_seen: list[str] = []

    def do_GET(self):
        _StubHandler.requests_seen.append(self.path)
        if self.headers.get("Authorization") != "apikey sesame":
            self.send_response(401)
            self.end_headers()
            return
        if self.path == "/ontologies":
            body = json.dumps(
                [{"id": name, "url": f"/ontologies/{name}"} for name in ONTOLOGY_BODIES]
            ).encode()
        else:
            name = self.path.rsplit("/", 1)[-1]
            body = ONTOLOGY_BODIES[name].encode()
        self.send_response(200)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture()
def stub_server():
    server = HTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    _StubHandler.requests_seen = []
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def test_fetch_missing_key_is_auth_error(tmp_path, monkeypatch):
    monkeypatch.delenv("OWLFORGE_API_KEY", raising=False)
    with pytest.raises(AuthError):
        fetch("http://127.0.0.1:1", tmp_path)
    assert not (tmp_path / "manifest.json").exists()


def test_fetch_downloads_and_checksums(stub_server, tmp_path):
    manifest = fetch(stub_server, tmp_path, api_key="sesame")
    assert len(manifest["fetched"]) == 2
    for entry in manifest["fetched"]:
        path = tmp_path / entry["file"]
        assert path.exists()
        import hashlib

        assert hashlib.sha256(path.read_bytes()).hexdigest() == entry["sha256"]
    parse((tmp_path / "beta.omn").read_text())


def test_fetch_resume_skips_matching_files(stub_server, tmp_path):
    fetch(stub_server, tmp_path, api_key="sesame")
    downloads_before = [p for p in _StubHandler.requests_seen if p != "/ontologies"]
    second = fetch(stub_server, tmp_path, api_key="sesame")
    downloads_after = [p for p in _StubHandler.requests_seen if p != "/ontologies"]
    assert downloads_after == downloads_before  # nothing re-downloaded
    assert all(entry.get("skipped") for entry in second["fetched"])


def test_fetch_cli_exit_code_without_key(tmp_path, monkeypatch, capsys):
    monkeypatch.delenv("OWLFORGE_API_KEY", raising=False)
    code, _, err = run_cli(
        capsys, "fetch", "--endpoint", "http://127.0.0.1:1", "--out", str(tmp_path)
    )
    assert code == 1
    assert "AuthError" in err
