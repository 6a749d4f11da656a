from .tensor import Tensor, no_grad
from .params import ParamStore, glorot_uniform
from .gradcheck import GradCheckReport, grad_check, grad_check_report
