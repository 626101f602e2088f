from eharqsim.stage import EvalStage, GenerateStage, SystemStage, TrainStage


def select_stage(command, experiment, **kwargs):
    """Select the pipeline stage of a command.

    Parameters
    ----------
    command : str
        the command, one of "gen", "train", "eval" and "system"
    experiment : ExperimentConfig
        the experiment settings
    kwargs : dict, optional
        entries overriding the stage section, None is ignored

    Returns
    -------
    stage : Stage
        the stage, ready to run

    """
    match command.lower():
        case "gen" | "generate":
            stage = GenerateStage(experiment, **kwargs)
        case "train":
            stage = TrainStage(experiment, **kwargs)
        case "eval" | "evaluate":
            stage = EvalStage(experiment, **kwargs)
        case "system":
            stage = SystemStage(experiment, **kwargs)
        case _:
            msg = f"The command '{command}' is not supported."
            raise ValueError(msg)

    return stage
