# Source package for the psybracket toolkit
