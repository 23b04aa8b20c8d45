# Test package for qcone
