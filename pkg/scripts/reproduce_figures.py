"""Write the CSV data behind every figure preset.

Usage: python scripts/reproduce_figures.py [OUT_DIR]
"""
import sys

from swanson_csm.figures import write_figure

PRESETS = ("fig1", "fig2", "fig3", "fig4", "fig5")


def main(out_dir: str = "figures") -> None:
    for preset in PRESETS:
        for path in write_figure(preset, out_dir):
            print(path)


if __name__ == "__main__":
    main(*sys.argv[1:2])
