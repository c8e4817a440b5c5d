"""Reading and writing of processes, slot structures, control combs and scenario specifications as JSON documents.
Every document is validated against the schemas shipped in comb_resources/resources/schemas before it is used."""

import json
import logging
import os

import jsonschema
import numpy as np

from comb_resources.comb_model.channel import Channel
from comb_resources.comb_model.control import ControlComb
from comb_resources.comb_model.process import ProcessTensor
from comb_resources.comb_model.slots import SlotStructure, TimeSlot
from comb_resources.linalg_core import MultiLegMatrix
from comb_resources.scenarios import ScenarioSpec

logger = logging.getLogger(__package__)

SCHEMA_VERSION = 1
SCHEMA_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'resources', 'schemas')
SLOTS_SUFFIX = '.slots.json'


def load_schema(name):
    with open(os.path.join(SCHEMA_DIR, f'{name}.schema.json')) as schema_file:
        return json.load(schema_file)


def validate_document(document, schema_name):
    """Validate a parsed JSON document, logging the failure before the exception propagates."""
    try:
        jsonschema.validate(document, load_schema(schema_name), format_checker=jsonschema.FormatChecker())
    except jsonschema.exceptions.ValidationError as err:
        logger.error(f'Error: document does not validate against the {schema_name} schema.')
        logger.error(f'Error message: {err.message}')
        logger.error(f'Complete document: {json.dumps(document)[:1000]}')
        raise
    except jsonschema.exceptions.SchemaError:
        logger.error(f'Error: packaged {schema_name} schema is invalid')
        raise


def read_json(path, schema_name):
    with open(path) as json_file:
        document = json.load(json_file)
    validate_document(document, schema_name)
    return document


def write_json(path, document):
    with open(path, 'w') as json_file:
        json.dump(document, json_file, indent=1)


def matrix_to_dict(m, metadata=None):
    entries = m.entries.reshape(-1)
    return {
        'schema_version': SCHEMA_VERSION,
        'legs': [[leg.label, leg.dim] for leg in m.legs],
        'entries': [[float(value.real), float(value.imag)] for value in entries],
        'metadata': {str(key): str(value) for key, value in (metadata or {}).items()},
    }


def matrix_from_dict(document):
    legs = [(label, dim) for label, dim in document['legs']]
    dim = int(np.prod([dim for _, dim in legs]))
    if len(document['entries']) != dim * dim:
        raise ValueError(f'Expected {dim * dim} entries for legs {legs}, got {len(document["entries"])}')
    pairs = np.array(document['entries'], dtype=np.float64).reshape(dim * dim, 2)
    entries = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(dim, dim)
    return MultiLegMatrix(entries, legs)


def write_matrix(path, m, metadata=None):
    write_json(path, matrix_to_dict(m, metadata))


def read_matrix(path):
    return matrix_from_dict(read_json(path, 'matrix_file'))


def slots_to_dict(slots):
    times = []
    for time in slots.times:
        in_leg, out_leg = time.in_leg, time.out_leg
        times.append({
            'label': time.label,
            'in': None if in_leg is None else [in_leg.label, in_leg.dim],
            'out': None if out_leg is None else [out_leg.label, out_leg.dim],
        })
    return {'schema_version': SCHEMA_VERSION, 'times': times}


def slots_from_dict(document):
    times = []
    for entry in document['times']:
        time = TimeSlot(entry['label'], in_dim=entry['in'] and entry['in'][1], out_dim=entry['out'] and entry['out'][1])
        for key, leg in (('in', time.in_leg), ('out', time.out_leg)):
            if entry[key] is not None and entry[key][0] != leg.label:
                raise ValueError(f'Leg {entry[key][0]!r} of time {time.label!r} should be labelled {leg.label!r}')
        times.append(time)
    return SlotStructure(times)


def slots_path(path):
    """Sidecar file holding the slot structure of the process stored at `path`."""
    base = path[:-len('.json')] if path.endswith('.json') else path
    return base + SLOTS_SUFFIX


def write_process(path, t, metadata=None):
    write_matrix(path, t.choi, metadata)
    write_json(slots_path(path), slots_to_dict(t.slots))


def read_process(path, check=True):
    """Process stored at `path` with its sidecar slot structure; validated unless check is False."""
    slots = slots_from_dict(read_json(slots_path(path), 'slot_structure'))
    return ProcessTensor(read_matrix(path), slots, check=check)


def comb_to_dict(comb, metadata=None):
    return {
        'schema_version': SCHEMA_VERSION,
        'pre': [matrix_to_dict(channel.choi) for channel in comb.pre],
        'post': [matrix_to_dict(channel.choi) for channel in comb.post],
        'coarse_mask': sorted(comb.coarse_mask),
        'metadata': {str(key): str(value) for key, value in (metadata or {}).items()},
    }


def _channel_from_dict(document):
    validate_document(document, 'matrix_file')
    return Channel.from_matrix(matrix_from_dict(document))


def comb_from_dict(document):
    validate_document(document, 'control_comb')
    pre = [_channel_from_dict(channel) for channel in document['pre']]
    post = [_channel_from_dict(channel) for channel in document['post']]
    return ControlComb(pre, post, document['coarse_mask'])


def write_comb(path, comb, metadata=None):
    write_json(path, comb_to_dict(comb, metadata))


def read_comb(path):
    with open(path) as comb_file:
        return comb_from_dict(json.load(comb_file))


def read_scenario(path):
    return ScenarioSpec.from_dict(read_json(path, 'scenario_spec'))
