"""JSON schemas for experiment configs and the JSON the CLI emits."""

CONFIG_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'title': 'ExperimentConfig',
    'type': 'object',
    'required': ['signal_eigs', 'noise_var', 'grid', 'trials', 'methods'],
    'additionalProperties': False,
    'properties': {
        'signal_eigs': {'type': 'array', 'items': {'type': 'number'}},
        'noise_var': {'type': 'number', 'exclusiveMinimum': 0},
        'grid': {
            'type': 'array', 'minItems': 1,
            'items': {'type': 'array', 'minItems': 2, 'maxItems': 2,
                      'items': {'type': 'integer', 'minimum': 2}},
        },
        'trials': {'type': 'integer', 'minimum': 1},
        'methods': {
            'type': 'array', 'minItems': 1, 'uniqueItems': True,
            'items': {'enum': ['new', 'mdl_modified', 'aic_wk', 'mdl_wk']},
        },
        'seed': {'type': 'integer', 'minimum': 0},
        'field': {'enum': ['real', 'complex']},
        'rotate_eigenvectors': {'type': 'boolean'},
    },
}

DETECTION_RESULT_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'title': 'DetectionResult',
    'type': 'object',
    'required': ['method', 'k_hat', 'scores'],
    'additionalProperties': False,
    'properties': {
        'method': {'enum': ['new', 'new_wideband', 'aic_wk', 'mdl_wk', 'mdl_modified']},
        'k_hat': {'type': 'integer', 'minimum': 0},
        'scores': {
            'type': 'array', 'minItems': 1,
            'items': {
                'type': 'object', 'required': ['k', 'score'], 'additionalProperties': False,
                'properties': {
                    'k': {'type': 'integer', 'minimum': 0},
                    # null encodes an infeasible (infinite) score
                    'score': {'type': ['number', 'null']},
                },
            },
        },
    },
}

REPORT_SIDECAR_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'title': 'ExperimentReportSidecar',
    'type': 'object',
    'required': ['schema_version', 'columns', 'config'],
    'additionalProperties': False,
    'properties': {
        'schema_version': {'type': 'string'},
        'columns': {'type': 'array', 'items': {'type': 'string'}},
        'config': {
            **{k: v for k, v in CONFIG_SCHEMA.items() if k not in ('$schema', 'title')},
            'required': CONFIG_SCHEMA['required'] + ['seed', 'field', 'rotate_eigenvectors'],
        },
    },
}

VALUE_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'title': 'QueryValue',
    'type': 'object',
    'required': ['query', 'value'],
    'properties': {
        'query': {'type': 'string'},
        'inputs': {'type': 'object'},
        'value': {'type': ['number', 'integer', 'array', 'boolean']},
    },
}
