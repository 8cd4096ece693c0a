"""Experiment defaults, figure presets and CSV layouts."""

ARTIFACT_VERSION = "0.1.0"

DEFAULTS = {
    "n": 1023,
    "theta": 0.0,
    "gamma": "s1",
    "marked": 0,
    "t_max": 100.0,
    "dt": None,
    "k_levels": 6,
    "guard_margin": 0.02,
    "theta_grid": (0.0, 1.5, 301),
    # gamma grid in units of 1/n: [0, GAMMA_GRID_SPAN * S1 n]
    "gamma_points": 200,
    "gamma_grid_span": 4.0,
}

# Energy window and sample count for the secular function curve
SECULAR_WINDOW = {
    "margin": 2.0,
    "points": 2001,
}

COLUMNS = {
    "spectrum": ["j", "alpha_j", "E_closed", "E_dense_sorted_match"],
    "sums": ["theta", "S1_exact", "S1_asymptotic", "S2_exact", "S2_asymptotic", "near_critical"],
    "critical-thetas": ["j", "theta_c_exact", "theta_c_approx", "residual"],
    "overlaps": ["gamma_times_n", "a", "overlap_s", "overlap_w", "energy"],
    "evolve": ["t", "p"],
    "secular": ["E", "F"],
    "laplacian": ["row", "col", "re", "im"],
}

# Each figure binds a command to the parameters it was drawn with.
FIGURES = {
    "1b": {
        "command": "overlaps",
        "description": "Overlaps of |s> and |w> with the lowest eigenstates, theta = 0",
        "params": {"theta": 0.0},
    },
    "1c": {
        "command": "evolve",
        "description": "Success probability with theta = 0 and gamma = 1/n",
        "params": {"theta": 0.0, "gamma": "asymptotic"},
    },
    "2b": {
        "command": "laplacian",
        "description": "Laplacian entries of the chiral complete graph with n = 5",
        "params": {"n": 5, "theta": 0.6},
    },
    "3": {
        "command": "sums",
        "description": "S1 and its approximation 1/(n cos theta)",
        "params": {"theta_grid": (0.0, 1.5, 1501)},
    },
    "4a": {
        "command": "overlaps",
        "description": "Overlaps with the eigenstates of H, theta = 0.8",
        "params": {"theta": 0.8},
    },
    "4b": {
        "command": "overlaps",
        "description": "Overlaps with the eigenstates of H, theta = 1.2",
        "params": {"theta": 1.2},
    },
    "4c": {
        "command": "overlaps",
        "description": "Overlaps with the eigenstates of H, theta = 1.4",
        "params": {"theta": 1.4},
    },
    "5": {
        "command": "sums",
        "description": "S2 and its approximation 1/(n cos theta)^2",
        "params": {"theta_grid": (0.0, 1.5, 1501)},
    },
    "6": {
        "command": "levels",
        "description": "Lowest six energies of H with gamma = S1",
        "params": {"theta_grid": (0.0, 1.5, 301), "k_levels": 6, "gamma": "s1"},
    },
    "7a": {
        "command": "evolve",
        "description": "Success probability with gamma = S1, theta = 0.8",
        "params": {"theta": 0.8, "gamma": "s1"},
    },
    "7b": {
        "command": "evolve",
        "description": "Success probability with gamma = S1, theta = 1.2",
        "params": {"theta": 1.2, "gamma": "s1"},
    },
    "7c": {
        "command": "evolve",
        "description": "Success probability with gamma = S1, theta = 1.4",
        "params": {"theta": 1.4, "gamma": "s1"},
    },
    "secular": {
        "command": "secular",
        "description": "F(E) with n = 5, theta = 0.6, gamma = 1",
        "params": {"n": 5, "theta": 0.6, "gamma": "1"},
    },
}
