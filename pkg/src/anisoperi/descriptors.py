"""Versioned JSON descriptors for convex bodies (schema anisoperi-body/1)."""

from __future__ import annotations

import numpy as np
from jsonschema import Draft202012Validator

from .bodies import ConvexBody, Ellipsoid, HalfspacePolytope, ProductBody
from .frames import Frame
from .longbody import LongBodyOp, cut, glue

SCHEMA_ID = "anisoperi-body/1"

_number_array = {"type": "array", "items": {"type": "number"}, "minItems": 1}
_matrix = {"type": "array", "items": _number_array, "minItems": 1}

BODY_SCHEMA = {
    "$id": SCHEMA_ID,
    "type": "object",
    "required": ["kind"],
    "properties": {"schema": {"const": SCHEMA_ID}},
    "oneOf": [
        {
            "properties": {
                "kind": {"const": "ellipsoid"},
                "semi_axes": _number_array,
                "rotation": _matrix,
            },
            "required": ["kind", "semi_axes"],
        },
        {
            "properties": {
                "kind": {"const": "polytope"},
                "normals": _matrix,
                "offsets": _number_array,
            },
            "required": ["kind", "normals", "offsets"],
        },
        {
            "properties": {
                "kind": {"const": "product"},
                "factors": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["body", "axes"],
                        "properties": {
                            "body": {"type": "object"},
                            "axes": {"type": "array", "items": {"type": "integer"}},
                        },
                    },
                    "minItems": 1,
                },
            },
            "required": ["kind", "factors"],
        },
        {
            "properties": {
                "kind": {"const": "glue"},
                "base": {"type": "object"},
                "payload": {"type": "object"},
                "plane": _matrix,
            },
            "required": ["kind", "base", "payload", "plane"],
        },
        {
            "properties": {
                "kind": {"const": "cut"},
                "base": {"type": "object"},
                "plane": _matrix,
                "shrink": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "polytope": {"type": "object"},
            },
            "required": ["kind", "base", "plane"],
        },
    ],
}

_validator = Draft202012Validator(BODY_SCHEMA)


class DescriptorError(ValueError):
    pass


def validate_descriptor(desc: dict) -> None:
    errors = sorted(_validator.iter_errors(desc), key=lambda e: e.path)
    if errors:
        raise DescriptorError("; ".join(e.message for e in errors[:3]))


def body_from_descriptor(desc: dict, seed: int = 0) -> ConvexBody:
    """Build a body from a (nested) descriptor tree, validating the schema."""
    validate_descriptor(desc)
    kind = desc["kind"]
    if kind == "ellipsoid":
        return Ellipsoid(desc["semi_axes"], desc.get("rotation"))
    if kind == "polytope":
        return HalfspacePolytope(desc["normals"], desc["offsets"])
    if kind == "product":
        factors = [(body_from_descriptor(f["body"], seed), tuple(f["axes"]))
                   for f in desc["factors"]]
        return ProductBody(factors)
    if kind == "glue":
        base = body_from_descriptor(desc["base"], seed)
        payload = body_from_descriptor(desc["payload"], seed)
        plane = Frame(np.asarray(desc["plane"], dtype=float).T)
        return glue(base, LongBodyOp("glue", plane, payload), seed=seed)
    if kind == "cut":
        base = body_from_descriptor(desc["base"], seed)
        plane = Frame(np.asarray(desc["plane"], dtype=float).T)
        if "shrink" in desc:
            payload = desc["shrink"]
        elif "polytope" in desc:
            sub = desc["polytope"]
            payload = HalfspacePolytope(sub["normals"], sub["offsets"])
        else:
            raise DescriptorError("cut descriptor needs shrink or polytope")
        return cut(base, LongBodyOp("cut", plane, payload), seed=seed)
    raise DescriptorError(f"unknown body kind {kind!r}")


def descriptor_for(body: ConvexBody) -> dict:
    """Descriptor of a primitive body (ellipsoid / polytope / product)."""
    if isinstance(body, Ellipsoid):
        return {"schema": SCHEMA_ID, "kind": "ellipsoid",
                "semi_axes": body.semi_axes.tolist(),
                "rotation": body.rotation.tolist()}
    if isinstance(body, HalfspacePolytope):
        return {"schema": SCHEMA_ID, "kind": "polytope",
                "normals": body.normals.tolist(), "offsets": body.offsets.tolist()}
    if isinstance(body, ProductBody):
        return {"schema": SCHEMA_ID, "kind": "product",
                "factors": [{"body": descriptor_for(b), "axes": list(axes)}
                            for b, axes in body.factors]}
    raise DescriptorError("only primitive bodies serialize back to descriptors")
