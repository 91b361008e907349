"""
The same workflow from the command line
=======================================

Every step is also an ``hbce`` subcommand that writes CSV files plus a
``manifest.txt`` of the settings used. Here they are driven from Python
through ``cli.main``; in a shell drop the list and type ``hbce gen-data ...``.
Runs a reduced sweep (two lambdas, soft penalty) into ``./hbce_demo``; a few minutes.
"""

from pathlib import Path

from hbce import cli

out = Path("hbce_demo")


def hbce(*argv):
    code = cli.main([str(a) for a in argv])
    print("$ hbce", " ".join(map(str, argv)), "->", code)
    return code


hbce("gen-data", "--taxonomy", "default", "--out", out / "data")
hbce("estimate-penalties", "--labels", out / "data" / "labels.csv", "--taxonomy", "default",
     "--split", out / "data" / "split.csv", "--out", out / "penalties.csv")
hbce("train", "--data", out / "data", "--taxonomy", "default", "--out-dir", out / "run",
     "--penalty", "data-driven", "--lambda", 0.5, "--mode", "soft")
hbce("eval", "--checkpoint", out / "run" / "model.ckpt", "--data", out / "data",
     "--out", out / "run" / "metrics.csv")
hbce("predict", "--checkpoint", out / "run" / "model.ckpt",
     "--image", out / "data" / "images" / "00000.pgm", "--out", out / "prediction.csv")
# The hard indicator has no gradient, so lambda only shapes training in soft mode.
hbce("sweep", "--data", out / "data", "--taxonomy", "default", "--out-dir", out / "sweep",
     "--lambdas", "0.5,1", "--mode", "soft")
print((out / "sweep" / "sweep.csv").read_text())

# Bad flags exit with 2, runtime failures (missing files) with 1.
hbce("gen-data", "--taxonomy", "default", "--n", 0, "--out", out / "bad")
