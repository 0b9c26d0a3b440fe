"""``python -m coherent_propagators`` starts the ``coherent-propagators`` command line.

Pipelines are run with ``kedro run`` from the project root.
"""

from coherent_propagators.cli import cli

if __name__ == "__main__":
    cli(prog_name="coherent-propagators")
