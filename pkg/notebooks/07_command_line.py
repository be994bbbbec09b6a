# %% [markdown]
# # Driving the diagnostics from the command line
#
# Every diagnostic is also a `cesaro-growth` subcommand that prints JSON or
# CSV.  Runs can be stored as flat `key=value` files.  The same entry point is
# callable from Python, which is what this script does.

# %%
import json

from cesaro_growth.cli import RunConfig, config_from_args, run

status, text = run(config_from_args(["regularize", "--q", "pow:1", "--alpha", "1"]))
print(status, json.loads(text)["rows"])

# %%
cfg = RunConfig("membership", {"u": "gap:pow2", "g": "pow:1", "jmax": 10})
print(cfg.to_text())
status, text = run(cfg)
print(json.loads(text)["verdict"])

# %%
status, text = run(config_from_args(["gap", "--g", "logpow:2", "--J", "60", "--multiplier", "logratio", "--format", "csv"]))
print(text.splitlines()[0])
print(text.splitlines()[-1])
