from eharqsim.ldpc.alist import parse_alist, read_alist, write_alist
from eharqsim.ldpc.decoder import DecoderTrace, min_sum_decode
from eharqsim.ldpc.encoder import GeneratorMapping, derive_generator, encode
from eharqsim.ldpc.matrix import (
    ParityCheckMatrix,
    SubcodeView,
    extract_subcode,
    regular_code,
)
