"""Module realizations: explicit families, Verma/simple/Weyl modules and tensors."""
