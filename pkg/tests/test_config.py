import pytest

from legaltopics.config import ConfigError, default_config, load_config


class TestDefaults:
    def test_pipeline_hyperparameters(self):
        cfg = default_config()
        assert cfg.section("umap") == {"n_components": 5, "min_dist": 0.0,
                                       "metric": "cosine", "n_neighbors": 5,
                                       "n_epochs": 500, "spread": 1.0}
        assert cfg.section("hdbscan")["min_cluster_size"] == 5
        assert cfg.section("hdbscan")["min_samples"] == 5
        assert cfg.section("topics") == {"top_n_words": 15, "diversity": 0.35,
                                         "n_repr_docs": 3}
        assert cfg.section("embedding")["id_model"] == \
            "dlicari/distil-ita-legal-bert"
        assert cfg.section("embedding")["max_seq_length"] == 512
        assert cfg.section("embedding")["batch_size"] == 32
        assert cfg.section("coherence")["window"] == 110

    def test_none_path_gives_defaults(self):
        assert load_config(None).values == default_config().values

    def test_derived_configs(self):
        cfg = default_config()
        rc = cfg.reduce_config(seed=7)
        assert rc.n_neighbors == 5 and rc.metric == "cosine" and rc.seed == 7
        cc = cfg.cluster_config()
        assert cc.min_cluster_size == 5 and cc.min_samples == 5


class TestLoading:
    def test_overrides_and_comments(self, tmp_path):
        path = tmp_path / "toolkit.ini"
        path.write_text("[umap]\nn_neighbors = 15  # larger graph\n"
                        "[topics]\ndiversity = 0.5\n", encoding="utf-8")
        cfg = load_config(path)
        assert cfg.section("umap")["n_neighbors"] == 15
        assert cfg.section("umap")["n_components"] == 5  # untouched default
        assert cfg.section("topics")["diversity"] == 0.5

    def test_unknown_section(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[misterioso]\nx = 1\n")
        with pytest.raises(ConfigError, match="misterioso"):
            load_config(path)

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[umap]\nwrong_name = 3\n")
        with pytest.raises(ConfigError, match="wrong_name"):
            load_config(path)

    def test_type_error_names_key(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[umap]\nn_neighbors = molti\n")
        with pytest.raises(ConfigError, match="n_neighbors"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.ini")


class TestLlmSections:
    def test_provider_block(self, tmp_path):
        path = tmp_path / "llm.ini"
        path.write_text(
            "[llm.locale]\nendpoint = http://127.0.0.1:8000/v1/chat\n"
            "model = llama-3-8b\ntimeout = 30\nretries = 2\n"
            "send_sampling_params = false\nauth_env = LLM_TOKEN\n")
        cfg = load_config(path)
        block = cfg.llm_providers["locale"]
        assert block["model"] == "llama-3-8b"
        assert block["timeout"] == 30.0
        assert block["send_sampling_params"] is False
        assert block["auth_env"] == "LLM_TOKEN"

    def test_endpoint_required(self, tmp_path):
        path = tmp_path / "llm.ini"
        path.write_text("[llm.locale]\nmodel = m\n")
        with pytest.raises(ConfigError, match="endpoint"):
            load_config(path)

    def test_unknown_llm_key(self, tmp_path):
        path = tmp_path / "llm.ini"
        path.write_text("[llm.locale]\nendpoint = e\nmodel = m\napi_key = x\n")
        with pytest.raises(ConfigError, match="api_key"):
            load_config(path)
