class DataError(Exception):
    """Bad input data (files, matrices, label sequences).

    The CLI maps this to exit code 2; usage errors exit with 1.
    """
