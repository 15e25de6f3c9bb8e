"""
Resolution of a RunConfig into the objects the engine works with.
"""

import logging
from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from src.core.errors import InvalidInputError
from src.core.models import GroupType
from src.core.utils import load_from_json_file
from src.cli.models import RunConfig
from src.cyclofield.characters import AdditiveCharacter
from src.cyclofield.field import Field, field_from_order, get_field
from src.quadform.datum import make_datum
from src.quadform.models import FormFile, GroupDatum, StableFunctional
from src.quadform.space import GradedQuadraticSpace, build_space
from src.quadform.stability import canonical_functional, expected_shapes
from src.sum_engine.models import CharacterSpec


logger = logging.getLogger("klspark.cli")

# order e of the pinned automorphism of each twisted type
TWIST_ORDER = {GroupType.UNITARY: 2, GroupType.D_OUTER: 2, GroupType.E6_OUTER: 2, GroupType.D4_TRIALITY: 3}


class RunContext:
    """Field, datum, space and characters of one RunConfig."""

    def __init__(
        self,
        config: RunConfig,
        field: Field,
        datum: GroupDatum,
        space: GradedQuadraticSpace,
        phi: StableFunctional,
        chi: CharacterSpec,
        psi: AdditiveCharacter,
    ):
        self.config = config
        self.field = field
        self.datum = datum
        self.space = space
        self.phi = phi
        self.chi = chi
        self.psi = psi
        self.warnings: List[str] = list(datum.warnings)


def resolve_field(config: RunConfig) -> Field:
    """
    Raises:
        InvalidInputError: If neither q nor p is given, or they disagree
    """
    if config.p is not None:
        field = get_field(config.p, config.e, config.modulus, config.field_seed)
        if config.q is not None and config.q != field.q:
            raise InvalidInputError(f"q={config.q} does not match p^e = {field.q}")
        return field
    if config.q is None:
        raise InvalidInputError("a field is required: give --q or --p/--e")
    if config.modulus is not None:
        raise InvalidInputError("an explicit modulus needs --p and --e")
    return field_from_order(config.q, config.field_seed)


def resolve_datum(config: RunConfig) -> GroupDatum:
    """
    Raises:
        InvalidInputError: If n or m is missing
        ClassificationError: If (type, n, m, d) is not admissible
    """
    if config.n is None or config.m is None:
        raise InvalidInputError(f"type {config.type_tag.value} needs --n and --m")
    return make_datum(config.type_tag, config.n, config.m, config.d)


def load_functional(path: str) -> StableFunctional:
    """
    A functional from a JSON file, either a form file or bare maps and forms.

    Raises:
        InvalidInputError: If the file is missing or malformed
    """
    data = load_from_json_file(path)
    if data is None:
        raise InvalidInputError(f"cannot read functional file {path}")
    try:
        if "functional" in data:
            return FormFile.model_validate(data).functional
        return StableFunctional.model_validate(data)
    except ValidationError as e:
        raise InvalidInputError(f"malformed functional file {path}: {e}")


def diagonal_functional(datum: GroupDatum, field: Field, values: List[int]) -> StableFunctional:
    """
    phi with identity-like maps and diag(values) as its top form.

    For split data the values are the n affine coordinates.

    Raises:
        InvalidInputError: If the values do not fit the datum
    """
    map_shapes, form_sizes = expected_shapes(datum)
    entries = [field.from_int(v) for v in values]
    if datum.family == "split":
        if len(entries) != datum.n:
            raise InvalidInputError(f"diag: needs {datum.n} coordinates for type A, got {len(entries)}")
        return StableFunctional.from_arrays([np.array([[v]]) for v in entries], [])
    if not form_sizes:
        raise InvalidInputError(f"type {datum.type_tag.value} has no quadratic form to take diag: values")
    size = form_sizes[0]
    if len(entries) != size:
        raise InvalidInputError(f"diag: needs {size} values for this datum, got {len(entries)}")
    maps = [np.eye(*shape, dtype=np.int64) for shape in map_shapes]
    forms = [np.diag(np.array(entries, dtype=np.int64))]
    forms += [np.eye(k, dtype=np.int64) for k in form_sizes[1:]]
    return StableFunctional.from_arrays(maps, forms)


def resolve_functional(config: RunConfig, datum: GroupDatum, space: GradedQuadraticSpace) -> StableFunctional:
    if config.functional is not None:
        return config.functional
    if config.phi.startswith("diag:"):
        return diagonal_functional(datum, space.field, config.diag_values())
    if config.phi.startswith("matrices:"):
        return load_functional(config.phi[len("matrices:"):])
    return canonical_functional(datum, space, degenerate=config.degenerate, seed=config.seed)


def build_context(config: RunConfig, phi: Optional[StableFunctional] = None) -> RunContext:
    """
    Build the run context.

    Explicit matrices are written back into the config so that the result
    file alone is enough to replay the run.
    """
    field = resolve_field(config)
    datum = resolve_datum(config)
    space = build_space(datum, field)
    phi = phi if phi is not None else resolve_functional(config, datum, space)
    if config.phi.startswith("matrices:") and config.functional is None:
        config = config.model_copy(update={"functional": phi})
    chi = CharacterSpec(exponents=config.chi) if config.chi is not None else CharacterSpec.trivial(datum.chi_arity)
    psi = AdditiveCharacter(field, config.psi_multiplier)
    logger.debug(f"Context: {space!r}, phi source {phi.source}")
    context = RunContext(config, field, datum, space, phi, chi, psi)
    e = TWIST_ORDER.get(datum.type_tag, 1)
    if (field.q - 1) % e:
        message = f"q={field.q} is not 1 mod e={e}; F_q lacks the e-th roots of unity"
        logger.warning(message)
        context.warnings.append(message)
    return context
