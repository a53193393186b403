# Tests package for the psybracket toolkit
