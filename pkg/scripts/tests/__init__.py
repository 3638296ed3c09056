# Tests package for kwitness
