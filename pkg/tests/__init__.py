# Tests package for Laurent Lab
