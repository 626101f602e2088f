from pathlib import Path

from eharqsim.classifier.classifier import TrainedClassifier
from eharqsim.utils.io import get_version, read_mapping, write_json

FORMAT_VERSION = 1


def save_classifier(classifier, file_path):
    """Write a trained classifier as a JSON model file.

    Parameters
    ----------
    classifier : TrainedClassifier
        the classifier
    file_path : str or pathlib.Path
        the model file

    Returns
    -------
    pathlib.Path
        the path of the written file

    """
    content = classifier.to_dict()
    content["format_version"] = FORMAT_VERSION
    content["version"] = get_version()
    return write_json(content, file_path)


def load_classifier(file_path):
    """Read a JSON model file written by save_classifier.

    Parameters
    ----------
    file_path : str or pathlib.Path
        the model file

    Returns
    -------
    TrainedClassifier
        the classifier

    """
    file_path = Path(file_path)
    content = read_mapping(file_path)

    found = content.get("format_version")
    if found != FORMAT_VERSION:
        msg = (
            f"The model file {file_path} has format version {found}, "
            f"expected {FORMAT_VERSION}."
        )
        raise ValueError(msg)

    try:
        return TrainedClassifier.from_dict(content)
    except KeyError as err:
        msg = f"The model file {file_path} has no entry {err}."
        raise ValueError(msg) from None
