import os

test_dir = os.path.dirname(__file__)
counterexample_spec_file = os.path.join(test_dir, 'resources', 'counterexample.json')
planted_spec_file = os.path.join(test_dir, 'resources', 'planted_unitary.json')
dephasing_spec_file = os.path.join(test_dir, 'resources', 'dephasing.json')
unknown_kind_spec_file = os.path.join(test_dir, 'resources', 'unknown_kind.json')
optimizer_config_file = os.path.join(test_dir, 'resources', 'optimizer_config.json')
unknown_setting_config_file = os.path.join(test_dir, 'resources', 'unknown_setting.json')

# Few restarts and sweeps for command-line runs.
QUICK_FLAGS = ['--restarts', '1', '--max-sweeps', '2', '--inner-iters', '5', '--threads', '1']
