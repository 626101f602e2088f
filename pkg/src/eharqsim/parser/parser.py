import argparse
from pathlib import Path

from eharqsim.utils.io import get_version

HELP_COMMAND = "the pipeline stage"
HELP_QUIET = "suppress log messages"
HELP_VERSION = "show the version"
HELP_CONFIG = "the YAML or JSON experiment configuration"
HELP_SEED = "the global seed of every random stream"
HELP_OUT = "the directory where the outputs will be saved"
HELP_N = "the number of records per split"
HELP_DATASET = "the CSV file of the records"
HELP_VAL = "the CSV file of the validation records (SAE)"
HELP_CLASSIFIER = "the classifier, e.g. HT0, HT5, LR, SAE"
HELP_GRADCHECK = "check the SAE gradients by finite differences first"
HELP_MODEL = "the JSON model file"
HELP_NAME = "the name of the classifier in the output files"
HELP_CURVES = "an operating curve as NAME=CSV, can be repeated"
HELP_BINORMAL = (
    "a synthetic binormal curve as NAME=SEPARATION, can be repeated"
)
HELP_SCENARIO = "a scenario, e.g. medium-long, high-short, can be repeated"
HELP_P_E = "the block error probability of every transmission"
HELP_SIMULATE = "add simulated packet failure rates at the optimal points"
HELP_SLOTS = "the number of simulated slots per point"


def parse_eharq(argv=None):
    """Parse arguments from command-line interface for eharq."""
    parser = argparse.ArgumentParser(add_help=True)
    parser.add_argument(
        "--version",
        action="version",
        version=_display_version_str(),
        help=HELP_VERSION,
    )
    subparsers = parser.add_subparsers(
        help=HELP_COMMAND, dest="command", required=True
    )

    # shared flags among different parsers
    parser_common = _parser_common()

    _parser_gen(subparsers, parents=[parser_common])
    _parser_train(subparsers, parents=[parser_common])
    _parser_eval(subparsers, parents=[parser_common])
    _parser_system(subparsers, parents=[parser_common])

    args = parser.parse_args(argv)

    # as a dict
    args_dict = vars(args)

    return args_dict


def _parser_common():
    parser = argparse.ArgumentParser(add_help=False)

    parser.add_argument("-q", "--quiet", action="store_true", help=HELP_QUIET)
    parser.add_argument("--config", type=Path, help=HELP_CONFIG)
    parser.add_argument("--seed", type=int, help=HELP_SEED)
    parser.add_argument("--out", type=Path, dest="out_dir", help=HELP_OUT)

    return parser


def _name_value(text):
    name, sep, value = text.partition("=")
    if not sep or not name or not value:
        msg = f"expected NAME=VALUE, got '{text}'"
        raise argparse.ArgumentTypeError(msg)
    return name, value


def _parser_gen(subparsers, **kwargs):
    subparser = subparsers.add_parser(
        "gen", help="generate the datasets", **kwargs
    )
    subparser.add_argument("--n", type=int, help=HELP_N)


def _parser_train(subparsers, **kwargs):
    subparser = subparsers.add_parser(
        "train", help="train a classifier", **kwargs
    )
    subparser.add_argument("--dataset", type=Path, help=HELP_DATASET)
    subparser.add_argument("--val", type=Path, help=HELP_VAL)
    subparser.add_argument("--classifier", type=str, help=HELP_CLASSIFIER)
    subparser.add_argument(
        "--gradcheck",
        action="store_true",
        default=False,
        help=HELP_GRADCHECK,
    )


def _parser_eval(subparsers, **kwargs):
    subparser = subparsers.add_parser(
        "eval", help="evaluate a classifier", **kwargs
    )
    subparser.add_argument("--model", type=Path, help=HELP_MODEL)
    subparser.add_argument("--dataset", type=Path, help=HELP_DATASET)
    subparser.add_argument("--name", type=str, help=HELP_NAME)


def _parser_system(subparsers, **kwargs):
    subparser = subparsers.add_parser(
        "system", help="evaluate the schemes in the system", **kwargs
    )
    subparser.add_argument(
        "--curves", type=_name_value, action="append", help=HELP_CURVES
    )
    subparser.add_argument(
        "--binormal", type=_name_value, action="append", help=HELP_BINORMAL
    )
    subparser.add_argument(
        "--scenario",
        type=str,
        action="append",
        dest="scenarios",
        help=HELP_SCENARIO,
    )
    subparser.add_argument("--p-e", type=float, help=HELP_P_E)
    subparser.add_argument(
        "--simulate",
        action="store_true",
        default=False,
        help=HELP_SIMULATE,
    )
    subparser.add_argument("--slots", type=int, help=HELP_SLOTS)


def _display_version_str():
    ver = get_version()
    return "%(prog)s " + ver
