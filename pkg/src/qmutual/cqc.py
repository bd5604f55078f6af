"""Classical -> quantum -> classical communication pipelines.

A finite message ensemble is coded into quantum states, sent through a
quantum channel and decoded by a POVM. End to end this is a finite
classical channel whose column ``k`` is the outcome distribution of the
decoded, transmitted code state ``sigma_k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import (
    ClassicalChannel,
    MeasurementDecoding,
    QuantumChannel,
    QuantumCoding,
    check_distribution,
    coding_channel,
    decode,
)
from .errors import DimMismatch
from .states import DensityMatrix, validate_density


@dataclass(frozen=True, eq=False)
class CqcPipeline:
    coding: QuantumCoding
    channel: QuantumChannel
    decoding: MeasurementDecoding

    def __post_init__(self):
        if self.coding.dim != self.channel.dim_in:
            raise DimMismatch(
                f"coding->channel: code dimension {self.coding.dim} != "
                f"channel input dimension {self.channel.dim_in}"
            )
        if self.channel.dim_out != self.decoding.dim_in:
            raise DimMismatch(
                f"channel->decoding: channel output dimension {self.channel.dim_out} != "
                f"POVM dimension {self.decoding.dim_in}"
            )

    @property
    def n_symbols(self) -> int:
        return self.coding.n_symbols


@dataclass(frozen=True)
class MessageEnsemble:
    probabilities: tuple[float, ...]

    def __post_init__(self):
        p = check_distribution(self.probabilities, name="message ensemble")
        object.__setattr__(self, "probabilities", tuple(float(x) for x in p))

    @property
    def n_messages(self) -> int:
        return len(self.probabilities)

    @classmethod
    def delta(cls, k: int, n: int) -> "MessageEnsemble":
        """The ensemble that always sends message ``k``."""
        p = [0.0] * n
        p[k] = 1.0
        return cls(tuple(p))

    @classmethod
    def uniform(cls, n: int) -> "MessageEnsemble":
        return cls(tuple([1.0 / n] * n))


@dataclass(frozen=True, eq=False)
class PipelineTrace:
    input: np.ndarray
    coded: DensityMatrix
    transmitted: DensityMatrix
    decoded: np.ndarray


def build_pipeline(codes: QuantumCoding, ch: QuantumChannel, dec: MeasurementDecoding) -> CqcPipeline:
    return CqcPipeline(codes, ch, dec)


def trace_pipeline(pipe: CqcPipeline, ensemble) -> PipelineTrace:
    """Record every stage of the pipeline for one message ensemble."""
    if not isinstance(ensemble, MessageEnsemble):
        ensemble = MessageEnsemble(tuple(np.ravel(ensemble)))
    lam = check_distribution(ensemble.probabilities, pipe.n_symbols, "message ensemble")
    coded = coding_channel(pipe.coding, lam)
    transmitted = validate_density(pipe.channel.apply_matrix(coded.matrix))
    decoded = decode(pipe.decoding, transmitted)
    return PipelineTrace(lam, coded, transmitted, decoded)


def transition_matrix(pipe: CqcPipeline) -> np.ndarray:
    outs = pipe.channel.apply_many(pipe.coding.stack())
    t = pipe.decoding.probabilities(outs)
    return t / t.sum(axis=0, keepdims=True)


def induced_classical_channel(pipe: CqcPipeline) -> ClassicalChannel:
    """Column ``k`` is the decoded output distribution for message ``k``."""
    return ClassicalChannel(transition_matrix(pipe))
