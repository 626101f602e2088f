from eharqsim.stage.config import ExperimentConfig
from eharqsim.stage.evaluate import EvalStage
from eharqsim.stage.generate import GenerateStage
from eharqsim.stage.stage import Stage
from eharqsim.stage.system import SystemStage
from eharqsim.stage.train import TrainStage
