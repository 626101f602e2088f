from eharqsim.channel.awgn import (
    BlockFading,
    ChannelConfig,
    ReceivedWord,
    transmit,
)
from eharqsim.channel.dataset import (
    GenerationConfig,
    calibrate_snr,
    estimate_bler,
    generate_dataset,
    load_code,
)
