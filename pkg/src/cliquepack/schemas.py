"""JSON schemas for every CLI payload (``cliquepack --json-schema NAME``)."""

RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}
VERTEX = {"type": "integer", "minimum": 1}
VERTICES = {"type": "array", "items": VERTEX}
EDGE = {"type": "array", "items": VERTEX, "minItems": 2, "maxItems": 2}

FRACTIONAL_PACKING = {
    "type": "object",
    "required": ["k", "weights"],
    "properties": {
        "k": {"type": "integer", "minimum": 2},
        "weights": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["vertices", "weight"],
                "properties": {"vertices": VERTICES, "weight": {"type": "string"}},
            },
        },
    },
}

FRACPACK = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "DecompositionReport",
    "type": "object",
    "required": ["k", "n", "m", "mode", "value", "target", "is_fractional_decomposition", "witness"],
    "properties": {
        "k": {"type": "integer"},
        "n": {"type": "integer"},
        "m": {"type": "integer"},
        "mode": {"enum": ["exact", "float"]},
        "value": {"type": "string"},
        "target": RATIONAL,
        "is_fractional_decomposition": {"type": "boolean"},
        "witness": FRACTIONAL_PACKING,
    },
}

INTPACK = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "IntegralPacking",
    "type": "object",
    "required": ["k", "copies"],
    "properties": {
        "k": {"type": "integer", "minimum": 2},
        "copies": {"type": "array", "items": VERTICES},
        "size": {"type": "integer"},
        "method": {"enum": ["exact", "greedy", "round"]},
        "maximal": {"type": "boolean"},
    },
}

GAP = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "GapReport",
    "type": "object",
    "required": ["nu_star", "nu", "gap", "method"],
    "properties": {
        "nu_star": RATIONAL,
        "nu": {"type": "integer", "minimum": 0},
        "gap": RATIONAL,
        "method": {"enum": ["exact", "greedy-lower-bound"]},
    },
}

PART = {
    "type": "object",
    "required": ["tag", "vertices", "edges"],
    "properties": {
        "tag": {"enum": ["Kk", "Kt", "KtMinus"]},
        "vertices": VERTICES,
        "edges": {"type": "array", "items": EDGE},
        "source": {"type": ["object", "null"]},
    },
}

CERTIFICATE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "DecompositionCertificate",
    "type": "object",
    "required": ["k", "parts", "meta"],
    "properties": {
        "k": {"type": "integer", "minimum": 3},
        "parts": {"type": "array", "items": PART},
        "meta": {
            "type": "object",
            "required": ["seed", "maxdeg_cap", "saturation_cap", "keep_near_kt", "rejections"],
        },
    },
}

FAILURE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Failure",
    "type": "object",
    "required": ["status", "stage", "message"],
    "properties": {
        "status": {"const": "failure"},
        "stage": {"type": "string"},
        "message": {"type": "string"},
        "details": {"type": "object"},
    },
}

DECOMPOSE = {"oneOf": [CERTIFICATE, FAILURE]}

DESIGN = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Design",
    "oneOf": [
        {
            "type": "object",
            "required": ["n", "t", "blocks"],
            "properties": {
                "n": {"type": "integer"},
                "t": {"type": "integer"},
                "blocks": {"type": "array", "items": VERTICES},
            },
        },
        {
            "type": "object",
            "required": ["valid", "violations"],
            "properties": {"valid": {"type": "boolean"}, "violations": {"type": "array"}},
        },
        FAILURE,
    ],
}

EXTREMAL = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ExtremalReport",
    "type": "object",
    "required": ["k", "n", "min_degree", "edge_count", "intra_edge_count", "structural_bound",
                 "target", "deficiency", "premise_checked"],
    "properties": {
        "k": {"type": "integer"},
        "n": {"type": "integer"},
        "min_degree": {"type": "integer"},
        "edge_count": {"type": "integer"},
        "intra_edge_count": {"type": "integer"},
        "structural_bound": RATIONAL,
        "target": RATIONAL,
        "deficiency": RATIONAL,
        "premise_checked": {"type": "boolean"},
        "lp_mode": {"enum": ["exact", "float"]},
        "lp_value": {"type": "string"},
        "parameters": {"type": "object"},
    },
}

BOUNDS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "BoundsReport",
    "type": "object",
    "oneOf": [
        {"required": ["kind", "bound", "vacuous"], "properties": {"kind": {"const": "edge-bound"}}},
        {"required": ["kind", "bound", "clamped"], "properties": {"kind": {"const": "fraction-bound"}}},
        {"required": ["kind", "bound", "per_edge_minimum", "argmin_edge", "holds"],
         "properties": {"kind": {"const": "verify"}}},
    ],
    "properties": {"bound": RATIONAL},
}

VERIFY = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "VerifyReport",
    "type": "object",
    "required": ["kind", "valid", "violations"],
    "properties": {
        "kind": {"enum": ["certificate", "integral-packing", "fractional-packing"]},
        "valid": {"type": "boolean"},
        "violations": {"type": "array", "items": {"type": "string"}},
        "counts": {"type": "object"},
    },
}

SCHEMAS = {
    "fracpack": FRACPACK,
    "intpack": INTPACK,
    "gap": GAP,
    "decompose": DECOMPOSE,
    "design": DESIGN,
    "extremal": EXTREMAL,
    "bounds": BOUNDS,
    "verify": VERIFY,
}
