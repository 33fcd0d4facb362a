"""Shared helpers for the demo scripts: an output folder and a CSV writer."""

import os

from ddlab.sweeps import write_csv

OUT_DIR = os.environ.get("DDLAB_DEMO_OUT", os.path.join(os.getcwd(), "demo_output"))


def out_path(name):
    os.makedirs(OUT_DIR, exist_ok=True)
    return os.path.join(OUT_DIR, name)


def save_rows(name, columns, rows):
    return write_csv(out_path(name), columns, rows)
