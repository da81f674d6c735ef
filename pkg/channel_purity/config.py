from os import environ

# Every constant can be overridden from the environment, e.g.
# PURITY_SEED=7 or PURITY_TOL_HERM=1e-8.
SEED = int(environ.get('PURITY_SEED', 0))

TOL_HERM = float(environ.get('PURITY_TOL_HERM', 1e-10))
TOL_NORM = float(environ.get('PURITY_TOL_NORM', 1e-12))
TOL_TP = float(environ.get('PURITY_TOL_TP', 1e-10))
TOL_PSD = float(environ.get('PURITY_TOL_PSD', 1e-10))
TOL_SUM = float(environ.get('PURITY_TOL_SUM', 1e-10))
TOL_UNITARY = float(environ.get('PURITY_TOL_UNITARY', 1e-10))

# Multistart ascent (purity) and alternating sweeps (injective)
TOL_OPT = float(environ.get('PURITY_TOL_OPT', 1e-10))
TOL_ALS = float(environ.get('PURITY_TOL_ALS', 1e-12))
RESTARTS = int(environ.get('PURITY_RESTARTS', 50))
MAX_ITER = int(environ.get('PURITY_MAX_ITER', 500))

# Injective restarts scale with the tensor size, see injective.restart_budget
MU_MIN_RESTARTS = int(environ.get('PURITY_MU_MIN_RESTARTS', 100))
MU_MAX_RESTARTS = int(environ.get('PURITY_MU_MAX_RESTARTS', 2000))

JACOBI_SWEEPS = int(environ.get('PURITY_JACOBI_SWEEPS', 100))
JACOBI_THRESHOLD = float(environ.get('PURITY_JACOBI_THRESHOLD', 1e-14))


class OptimizerConfig:
    """Budget of a multistart optimizer.

    Args:
        restarts (int, optional): Number of restarts. ``None`` lets the
            optimizer pick its own default.
        max_iter (int): Iterations (or sweeps) per restart.
        tol (float): Stop a restart once an iteration improves the value by
            less than this.
    """
    def __init__(self, restarts=None, max_iter=None, tol=None):
        if restarts is not None and restarts < 1:
            raise ValueError("restarts must be >= 1, got {}".format(restarts))
        if tol is not None and not tol > 0:
            raise ValueError("tol must be > 0, got {}".format(tol))
        self.restarts = restarts
        self.max_iter = MAX_ITER if max_iter is None else max_iter
        self.tol = tol

    def __repr__(self):
        return "OptimizerConfig(restarts={}, max_iter={}, tol={})".format(
            self.restarts, self.max_iter, self.tol)


def get_optimizer_config(cfg=None, **kwargs):
    '''
    Helper function to build an optimizer budget.
    An explicit ``cfg`` wins; otherwise keyword arguments override the
    module defaults.

    >>> get_optimizer_config(restarts=3, tol=1e-8)
    OptimizerConfig(restarts=3, max_iter=500, tol=1e-08)
    '''
    if cfg is not None:
        return cfg
    return OptimizerConfig(**kwargs)


if __name__ == "__main__":
    import doctest
    doctest.testmod()
