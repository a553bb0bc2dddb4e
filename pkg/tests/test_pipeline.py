import json

import pytest

from derivqa.depgraph import BASE, DERIVATIONAL
from derivqa.pipeline import (
    ConfigError,
    PipelineConfig,
    build_bank,
    enrich_for_mode,
    load_config,
    load_resources,
    load_sentences,
    packaged_data,
)

from conftest import FIXTURES


def write_config(tmp_path, overrides=None, drop=()):
    base = {
        "dictionary": "dictionary.tsv",
        "inflections": "inflections.tsv",
        "corpus_lexicon": "corpus_lexicon.tsv",
        "synonyms": "synonyms.tsv",
    }
    benchmark = FIXTURES / "benchmark"
    for filename in base.values():
        (tmp_path / filename).write_bytes((benchmark / filename).read_bytes())
    config = {k: v for k, v in base.items() if k not in drop}
    config.update(overrides or {})
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return path


class TestConfig:
    def test_loads_benchmark_config(self, benchmark_config):
        config = benchmark_config
        assert config.suffix_threshold == 2
        assert config.symmetrize is True
        assert config.mode == "deriv"
        assert config.dictionary.is_absolute()

    def test_missing_required_path(self, tmp_path):
        path = write_config(tmp_path, drop=("synonyms",))
        with pytest.raises(ConfigError, match="missing required path 'synonyms'"):
            load_config(path)

    def test_nonexistent_file(self, tmp_path):
        path = write_config(tmp_path, {"dictionary": "absent.tsv"})
        with pytest.raises(ConfigError, match="no such file"):
            load_config(path)

    def test_unknown_key(self, tmp_path):
        path = write_config(tmp_path, {"surprise": 1})
        with pytest.raises(ConfigError, match="unknown config keys"):
            load_config(path)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ConfigError, match="invalid JSON"):
            load_config(path)

    def test_non_object_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("[1]", encoding="utf-8")
        with pytest.raises(ConfigError, match="must be a JSON object"):
            load_config(path)

    def test_type_checks(self, tmp_path):
        path = write_config(tmp_path, {"symmetrize": "yes"})
        with pytest.raises(ConfigError, match="symmetrize must be a boolean"):
            load_config(path)
        path = write_config(tmp_path, {"k": "three"})
        with pytest.raises(ConfigError, match="k must be an integer"):
            load_config(path)

    def test_k_range(self, tmp_path):
        path = write_config(tmp_path, {"k": 6})
        with pytest.raises(ConfigError, match=r"k must be in \[1, 5\]"):
            load_config(path)

    def test_bad_mode(self, tmp_path):
        path = write_config(tmp_path, {"mode": "turbo"})
        with pytest.raises(ConfigError, match="mode must be one of"):
            load_config(path)

    def test_numeric_floors(self, tmp_path):
        path = write_config(tmp_path, {"min_stem_len": 0})
        with pytest.raises(ConfigError, match="min_stem_len must be >= 1"):
            load_config(path)

    def test_relative_paths_resolve_against_config_dir(self, tmp_path):
        path = write_config(tmp_path)
        config = load_config(path)
        assert config.dictionary == (tmp_path / "dictionary.tsv").resolve()

    def test_packaged_fallbacks_exist(self):
        for name in ("code_table.tsv", "euphonics.tsv", "patterns.txt"):
            assert packaged_data(name).is_file(), name


class TestLoadResources:
    def test_optional_paths_fall_back_to_packaged_data(self, tmp_path):
        path = write_config(tmp_path, {"min_syllables": 2})
        res = load_resources(load_config(path))
        assert [p.pattern_id for p in res.patterns][:2] == ["v2n_eur_svo", "v2n_eur_subj"]
        assert "E" in res.code_table
        # the packaged euphonics file carries only the mute-e rule, so the
        # éd->ess surface is absent without the benchmark's euphonics file
        assert res.resource.records_for("succéder") == []

    def test_symmetrize_off_means_no_back_derivatives(self, tmp_path):
        config = write_config(tmp_path, {
            "euphonics": str(FIXTURES / "benchmark" / "euphonics.tsv"),
            "min_syllables": 2,
        })
        res = load_resources(load_config(config))
        assert res.config.symmetrize is False
        assert res.resource.records_for("coupure") == []
        assert all(not s.extra_instructions for s in res.dictionary)

    def test_symmetrize_on_rebuilds(self, benchmark_resources):
        assert [r.surface for r in benchmark_resources.resource.records_for("coupure")] == ["couper"]


class TestSentences:
    def test_load_sentences(self, tmp_path):
        path = tmp_path / "s.tsv"
        path.write_text("# bank\ns1\tle courant rapide .\ns2\tla coupure du courant .\n",
                        encoding="utf-8")
        assert load_sentences(path) == [
            ("s1", "le courant rapide ."),
            ("s2", "la coupure du courant ."),
        ]

    def test_duplicate_ids_rejected(self, tmp_path):
        path = tmp_path / "s.tsv"
        path.write_text("s1\ta .\ns1\tb .\n", encoding="utf-8")
        from derivqa.lexica import LexiconError
        with pytest.raises(LexiconError, match="duplicate sentence id"):
            load_sentences(path)

    def test_wrong_columns_rejected(self, tmp_path):
        path = tmp_path / "s.tsv"
        path.write_text("s1\n", encoding="utf-8")
        from derivqa.lexica import LexiconError
        with pytest.raises(LexiconError, match="expected 2 columns"):
            load_sentences(path)


class TestBankConstruction:
    def test_modes_disagree_on_enrichment(self, benchmark_resources):
        from derivqa.depgraph import toy_parse
        from derivqa.wsd import disambiguate
        res = benchmark_resources
        graph = toy_parse("l'ouvrier a coupé le courant .", res.lexicon, "s11")
        disambiguate(graph, res.compilation, res.dictionary)

        baseline = enrich_for_mode(graph, res, "baseline")
        assert baseline is graph

        base = enrich_for_mode(graph, res, "base")
        assert all(d.provenance == BASE for d in base.deps)
        assert any(t.alternates for t in base.tokens)

        deriv = enrich_for_mode(graph, res, "deriv")
        assert any(d.provenance == DERIVATIONAL for d in deriv.deps)

        everything = enrich_for_mode(graph, res, "all")
        deriv_count = sum(1 for d in deriv.deps if d.provenance == DERIVATIONAL)
        all_count = sum(1 for d in everything.deps if d.provenance == DERIVATIONAL)
        assert all_count >= deriv_count

    def test_unknown_mode_rejected(self, benchmark_resources):
        from derivqa.depgraph import toy_parse
        graph = toy_parse("la coupure du courant .", benchmark_resources.lexicon)
        with pytest.raises(ConfigError, match="mode must be one of"):
            enrich_for_mode(graph, benchmark_resources, "turbo")

    def test_build_bank_skips_unparsable(self, benchmark_resources, caplog):
        res = benchmark_resources
        rows = [
            ("s1", "l'ouvrier a coupé le courant ."),
            ("s2", "grmbl zzz ."),
            ("s3", "la coupure du courant ."),
        ]
        with caplog.at_level("WARNING"):
            bank = build_bank(res, "baseline", sentences=rows)
        assert [g.sentence_id for g in bank] == ["s1", "s3"]
        assert len(res.skipped_sentences) == 1
        assert res.skipped_sentences[0][0] == "s2"
        assert any("skipping s2" in r.message for r in caplog.records)

    def test_build_bank_requires_sentences(self, tmp_path):
        path = write_config(tmp_path, {"min_syllables": 2})
        res = load_resources(load_config(path))
        with pytest.raises(ConfigError, match="no sentences file"):
            build_bank(res, "baseline")

    def test_benchmark_bank_parses_fully(self, benchmark_resources):
        bank = build_bank(benchmark_resources, "baseline")
        assert len(bank) == 55
        assert benchmark_resources.skipped_sentences == []

    def test_questions_are_disambiguated_but_never_enriched(self, benchmark_questions):
        parsed = benchmark_questions
        assert len(parsed) == 22
        for question, gold in parsed:
            assert all(d.provenance == BASE for d in question.graph.deps)
            assert all(not t.alternates for t in question.graph.tokens)
            assert all(not t.features.get("deriv_pattern")
                       for t in question.graph.tokens)
        formalise = next(q for q, _ in parsed if q.question_id == "QA3")
        verb = next(t for t in formalise.graph.tokens if t.lemma == "formaliser")
        assert verb.sense_id == 2
