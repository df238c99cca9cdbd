"""Tests for the encoder/heads network."""

import numpy as np
import pytest

from pim_har.errors import ShapeMismatchError
from pim_har.models.config import LimbPair, Precision
from pim_har.models.network import EncoderSpec
from pim_har.training.heads import build_heads, classifier_head
from pim_har.training.network import PimNetwork

PAIRS = [LimbPair(name="arms", left="left_arm", right="right_arm")]


def test_default_encoder_shapes() -> None:
    """Test the default encoder on 200-sample windows and its minimum length."""
    network = PimNetwork(6, EncoderSpec(), [classifier_head(4)], seed=0)
    assert network.encoder_spec.output_lengths(200) == [177, 162, 155]
    assert network.encoder_spec.min_input_length == 46
    x = np.random.default_rng(0).normal(size=(2, 6, 46))
    assert network.embed(x).shape == (2, 96)


def test_embedding_and_head_outputs(small_encoder: EncoderSpec) -> None:
    """Test embedding size r and the output size of every head."""
    heads = build_heads(["left_arm", "right_arm"], PAIRS)
    network = PimNetwork(6, small_encoder, heads, seed=0)
    emb = network.embed(np.ones((3, 6, 30)))
    assert emb.shape == (3, 8)
    for spec in heads:
        assert network.heads[spec.name].forward(emb).shape == (3, spec.output_dim)


def test_check_input(small_encoder: EncoderSpec) -> None:
    """Test rejection of wrong channel counts, ranks and short windows."""
    network = PimNetwork(6, small_encoder, [classifier_head(2)])
    with pytest.raises(ShapeMismatchError):
        network.check_input(np.zeros((1, 5, 30)))
    with pytest.raises(ShapeMismatchError):
        network.check_input(np.zeros((6, 30)))
    with pytest.raises(ShapeMismatchError):
        network.check_input(np.zeros((1, 6, 14)))
    network.check_input(np.zeros((1, 6, 15)))


def test_parameter_names(small_encoder: EncoderSpec) -> None:
    """Test encoder and head parameters are namespaced."""
    network = PimNetwork(6, small_encoder, [classifier_head(2)])
    names = list(network.parameters())
    assert names[0] == "encoder.0.weight"
    assert "heads.classifier.0.weight" in names
    assert all(n.startswith("heads.") for n in network.parameters("heads."))


def test_head_init_independent_of_other_heads(small_encoder: EncoderSpec) -> None:
    """Test that a head's initial weights do not depend on its siblings."""
    heads = build_heads(["left_arm", "right_arm"], PAIRS)
    full = PimNetwork(6, small_encoder, heads, seed=3)
    alone = PimNetwork(6, small_encoder, heads[-1:], seed=3)
    prefix = f"heads.{heads[-1].name}."
    assert full.weight_hash(prefix) == alone.weight_hash(prefix)
    assert full.weight_hash("encoder.") == alone.weight_hash("encoder.")


def test_seed_changes_weights(small_encoder: EncoderSpec) -> None:
    """Test equal seeds give equal weights and different seeds do not."""
    a = PimNetwork(6, small_encoder, [classifier_head(2)], seed=1)
    b = PimNetwork(6, small_encoder, [classifier_head(2)], seed=1)
    c = PimNetwork(6, small_encoder, [classifier_head(2)], seed=2)
    assert a.weight_hash() == b.weight_hash()
    assert a.weight_hash() != c.weight_hash()


def test_describe_round_trip(small_encoder: EncoderSpec) -> None:
    """Test rebuilding a network from its description and state."""
    heads = build_heads(["left_arm", "right_arm"], PAIRS)
    network = PimNetwork(6, small_encoder, heads, seed=5)
    rebuilt = PimNetwork.from_description(network.describe())
    assert rebuilt.describe() == network.describe()
    assert rebuilt.weight_hash() == network.weight_hash()


def test_load_state_dict_errors(small_encoder: EncoderSpec) -> None:
    """Test missing or mis-shaped values are rejected."""
    network = PimNetwork(6, small_encoder, [classifier_head(2)])
    state = network.state_dict()
    del state["encoder.0.bias"]
    with pytest.raises(ShapeMismatchError):
        network.load_state_dict(state)
    state = network.state_dict()
    state["encoder.0.bias"] = np.zeros(99)
    with pytest.raises(ShapeMismatchError):
        network.load_state_dict(state)


def test_float32_precision(small_encoder: EncoderSpec) -> None:
    """Test single precision parameters and activations."""
    network = PimNetwork(
        6, small_encoder, [classifier_head(2)], precision=Precision.FLOAT32
    )
    assert all(p.value.dtype == np.float32 for p in network.parameters().values())
    assert network.embed(np.ones((1, 6, 20))).dtype == np.float32
