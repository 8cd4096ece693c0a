import sys
sys.path.insert(0, 'src')
import json
import math

from walk.graph import ChiralCompleteGraph
from search.hamiltonian import SearchProblem
from search.dynamics import first_peak, success_trace


def baseline(n=1023):
    """Success peak with theta = 0, gamma = 1/n, against pi sqrt(n) / 2."""
    problem = SearchProblem(ChiralCompleteGraph(n, 0.0), 1.0 / n)
    trace = success_trace(problem, t_max=60.0, dt=0.05)
    peak = first_peak(trace)
    return {
        "n": n,
        "t_peak": peak.t_peak,
        "p_peak": peak.p_peak,
        "expected_t_peak": math.pi * math.sqrt(n) / 2,
        "norm_drift": trace.norm_drift,
    }


if __name__ == "__main__":
    print('RESULT:')
    print(json.dumps(baseline(), indent=2))
