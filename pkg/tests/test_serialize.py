import json

import numpy as np
import pytest

from epidss.bayes import (
    NetworkFormatError,
    dumps_network,
    load_network,
    loads_network,
    network_to_document,
    save_network,
    validate_network,
)

from conftest import build_disease_test_net
from oracles import random_binary_network


class TestRoundTrip:
    def test_load_save_load_is_value_identical(self, tmp_path):
        net = build_disease_test_net()
        first = tmp_path / "net1.json"
        second = tmp_path / "net2.json"
        save_network(net, first)
        loaded = load_network(first)
        save_network(loaded, second)
        reloaded = load_network(second)
        assert network_to_document(loaded) == network_to_document(reloaded)
        assert first.read_text() == second.read_text()

    def test_round_trip_preserves_random_network(self):
        rng = np.random.default_rng(12)
        net = random_binary_network(rng, 9)
        loaded = loads_network(dumps_network(net))
        assert validate_network(loaded).ok
        assert network_to_document(loaded) == network_to_document(
            loads_network(dumps_network(loaded))
        )
        for var_id in net.variable_ids:
            for key, row in net.cuts[var_id].rows.items():
                np.testing.assert_allclose(loaded.cuts[var_id].rows[key], row, atol=1e-15)

    def test_document_sections(self):
        doc = network_to_document(build_disease_test_net())
        assert set(doc) == {"variables", "edges", "cuts"}
        assert doc["cuts"]["Test"]["rows"]["present"] == [0.95, 0.05]
        assert doc["cuts"]["Disease"]["rows"][""] == [0.01, 0.99]


class TestLoading:
    def test_missing_section_rejected(self):
        with pytest.raises(NetworkFormatError, match="missing the 'cuts'"):
            loads_network(json.dumps({"variables": [], "edges": []}))

    def test_not_json_rejected(self):
        with pytest.raises(NetworkFormatError, match="not valid JSON"):
            loads_network("{nope")

    def test_row_key_arity_checked(self):
        doc = network_to_document(build_disease_test_net())
        doc["cuts"]["Test"]["rows"]["present|extra"] = [0.5, 0.5]
        with pytest.raises(NetworkFormatError, match="does not match"):
            loads_network(json.dumps(doc))

    def test_drifted_row_renormalized_with_warning(self):
        doc = network_to_document(build_disease_test_net())
        doc["cuts"]["Disease"]["rows"][""] = [0.02, 1.98]  # sums to 2
        with pytest.warns(UserWarning, match="renormalized on load"):
            net = loads_network(json.dumps(doc))
        np.testing.assert_allclose(net.table("Disease").row(()), [0.01, 0.99])
        assert validate_network(net).ok

    def test_small_drift_renormalized_silently(self):
        doc = network_to_document(build_disease_test_net())
        doc["cuts"]["Disease"]["rows"][""] = [0.01, 0.99 + 4e-8]
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error")
            net = loads_network(json.dumps(doc))
        assert validate_network(net).ok
