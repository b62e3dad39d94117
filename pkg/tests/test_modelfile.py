"""Tests for modelfile and models modules."""

import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from cooccur.constants import CHECK_NAMES
from cooccur.exceptions import BadValue, ModelFileError
from cooccur.modelfile import ModelFile
from cooccur.models import CheckConfig, EngineConfig
from cooccur.space import MeasureKind


@pytest.fixture
def minimal() -> dict:
    return {
        "spaces": {"Omega": {"size": 2}},
        "measures": {"P": {"space": "Omega", "weights": ["1/2", "1/2"], "kind": "probability"}},
        "objects": {"X": {"domain": "Omega", "codomain": "Omega", "map": [1, 0]}},
    }


class TestModelFile:
    """Tests for loading model files."""

    def test_load(self, m0):
        """Test that every declaration resolves."""
        assert set(m0.objects) == {"X1", "X2", "X3"}
        assert m0.law.weights == (Fraction(1, 4),) * 4
        assert m0.spaces["parity"].labels == ("e", "o")
        assert set(m0.scms) == {"identity", "chain"}

    def test_engine_model(self, m0):
        """Test that objects on the base space are exposed."""
        assert set(m0.engine_model.objects) == {"X1", "X2", "X3"}

    def test_single_probability_is_the_law(self, minimal):
        """Test the implicit law when only one probability is declared."""
        mf = ModelFile.from_dict(minimal)
        assert mf.law is mf.measures["P"]

    def test_several_probabilities_need_law(self, minimal):
        """Test that an ambiguous law is a load error."""
        minimal["measures"]["Q"] = {"space": "Omega", "weights": [1, 0], "kind": "probability"}
        with pytest.raises(ModelFileError):
            ModelFile.from_dict(minimal)

    def test_law_must_be_probability(self, minimal):
        """Test that the named law is a probability measure."""
        minimal["measures"]["P"]["kind"] = "finite"
        minimal["law"] = "P"
        with pytest.raises(ModelFileError):
            ModelFile.from_dict(minimal)

    def test_no_law(self, minimal):
        """Test that queries need a base probability."""
        del minimal["measures"]
        mf = ModelFile.from_dict(minimal)
        with pytest.raises(ModelFileError):
            _ = mf.engine_model

    def test_float_weights_rejected(self, minimal):
        """Test that floats are not exact rationals."""
        minimal["measures"]["P"]["weights"] = [0.5, 0.5]
        with pytest.raises(ModelFileError):
            ModelFile.from_dict(minimal)

    def test_weights_must_sum_to_one(self, minimal):
        """Test that probability weights are checked on load."""
        minimal["measures"]["P"]["weights"] = ["1/2", "1/3"]
        with pytest.raises(ModelFileError, match="Measure 'P'"):
            ModelFile.from_dict(minimal)

    def test_unknown_space(self, minimal):
        """Test that unresolved ids are load errors."""
        minimal["objects"]["X"]["codomain"] = "Nowhere"
        with pytest.raises(ModelFileError, match="Unknown space id"):
            ModelFile.from_dict(minimal)

    def test_unknown_key(self, minimal):
        """Test that unknown keys are rejected."""
        minimal["extra"] = {}
        with pytest.raises(ModelFileError):
            ModelFile.from_dict(minimal)

    def test_bad_map(self, minimal):
        """Test that object images must be outcomes."""
        minimal["objects"]["X"]["map"] = [0, 7]
        with pytest.raises(ModelFileError, match="Object 'X'"):
            ModelFile.from_dict(minimal)

    def test_invalid_json(self, tmp_path):
        """Test that unreadable files are load errors."""
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ModelFileError):
            ModelFile.from_path(path)

    def test_missing_file(self, tmp_path):
        """Test loading a file that does not exist."""
        with pytest.raises(ModelFileError):
            ModelFile.from_path(tmp_path / "missing.json")

    def test_product_cap_applies_to_scms(self, m0_path):
        """Test that the configured cap bounds SCM product spaces."""
        data = json.loads(m0_path.read_text(encoding="utf-8"))
        with pytest.raises(ModelFileError):
            ModelFile.from_dict(data, EngineConfig(product_cap=2))

    def test_exo_law_defaults_to_probability(self, m0):
        """Test that an exogenous law without a kind is a probability."""
        assert m0.get_scm("identity").exo_law.kind is MeasureKind.PROBABILITY

    def test_variables_load(self, m0):
        """Test that variables are read with exact values."""
        assert m0.get_variable("Y").values == (0, 1)

    def test_variable_unknown_space(self, minimal):
        """Test that variables on undeclared spaces are load errors."""
        minimal["variables"] = {"Y": {"space": "Nowhere", "values": [0, 1]}}
        with pytest.raises(ModelFileError, match="Variable 'Y'"):
            ModelFile.from_dict(minimal)

    def test_variable_wrong_length(self, minimal):
        """Test that a variable needs one value per outcome."""
        minimal["variables"] = {"Y": {"space": "Omega", "values": ["1/2"]}}
        with pytest.raises(ModelFileError, match="Variable 'Y'"):
            ModelFile.from_dict(minimal)

    def test_exo_law_must_normalize(self, minimal):
        """Test that an implicit probability exogenous law must sum to one."""
        minimal["scms"] = {
            "bad": {
                "endo": {"1": {"size": 1}},
                "exo": {"2": {"size": 1}},
                "exo_law": {"weights": ["1/2"]},
                "mechanism": {"table": [[0]]},
            }
        }
        with pytest.raises(ModelFileError):
            ModelFile.from_dict(minimal)


class TestQueries:
    """Tests for resolving queries and statements."""

    def test_named_query(self, m0):
        """Test a named query."""
        q = m0.query("cond")
        assert len(q.targets) == 1
        assert len(q.conditions) == 1

    def test_unknown_query(self, m0):
        """Test an unknown query id."""
        with pytest.raises(ModelFileError):
            m0.query("nope")

    def test_inline_query_unknown_object(self, m0):
        """Test that unknown objects in inline queries are load errors."""
        with pytest.raises(ModelFileError):
            m0.build_query({"targets": [{"object": "Z", "event": [0]}]})

    def test_inline_query_bad_event(self, m0):
        """Test that unknown outcomes in events are domain errors."""
        with pytest.raises(BadValue):
            m0.build_query({"targets": [{"object": "X1", "event": ["z"]}]})

    def test_constraints_must_be_list(self, m0):
        """Test that inline constraints are a JSON list."""
        with pytest.raises(ModelFileError):
            m0.constraints({"object": "X1"})

    def test_base_family(self, m0):
        """Test resolving a base family."""
        family = m0.base_family("counting")
        assert family.measure(1).kind is MeasureKind.BASE


class TestConfig:
    """Tests for configuration models."""

    def test_defaults(self):
        """Test default configuration values."""
        assert EngineConfig().product_cap == 10**6
        assert CheckConfig().selected == CHECK_NAMES

    def test_unknown_check(self):
        """Test that unknown check names are rejected."""
        with pytest.raises(ValidationError):
            CheckConfig(checks=["tower", "nope"])

    def test_selection_in_report_order(self):
        """Test that selections follow the registry order."""
        config = CheckConfig(checks=["tower", "pushforward-mass"])
        assert config.selected == ("pushforward-mass", "tower")

    def test_negative_cases(self):
        """Test that case counts are nonnegative."""
        with pytest.raises(ValidationError):
            CheckConfig(cases=-1)
