from pypegasus import parse_config
from pypegasus.exceptions import ConfigError

try:
    parse_config('{"command": "gridworld", "params": {"gama": 0.9}}')
except ConfigError as e:
    print(e.key)  # params.gama
    print(e)  # invalid config at 'params.gama': Extra inputs are not permitted
