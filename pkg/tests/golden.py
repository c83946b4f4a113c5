"""Expected values transcribed by hand from the drawings of the small cases."""

# Undirected E-edges among subsets of {0,1,2}, read off the three-dimensional drawing.
GOLDEN_E = {
    0: {("{}", "{0}"), ("{1}", "{0,1}"), ("{2}", "{0,2}"), ("{1,2}", "{0,1,2}")},
    1: {("{}", "{1}"), ("{0}", "{0,1}"), ("{2}", "{1,2}"), ("{0,2}", "{0,1,2}")},
    2: {("{}", "{2}"), ("{0}", "{0,2}"), ("{1}", "{1,2}"), ("{0,1}", "{0,1,2}")},
}

# Directed D-edges from each subset to the face it lies on.
GOLDEN_D = {
    0: {("{}", "(0,0)"), ("{1}", "(0,0)"), ("{2}", "(0,0)"), ("{1,2}", "(0,0)"),
        ("{0}", "(0,1)"), ("{0,1}", "(0,1)"), ("{0,2}", "(0,1)"), ("{0,1,2}", "(0,1)")},
    1: {("{}", "(1,0)"), ("{0}", "(1,0)"), ("{2}", "(1,0)"), ("{0,2}", "(1,0)"),
        ("{1}", "(1,1)"), ("{0,1}", "(1,1)"), ("{1,2}", "(1,1)"), ("{0,1,2}", "(1,1)")},
    2: {("{}", "(2,0)"), ("{0}", "(2,0)"), ("{1}", "(2,0)"), ("{0,1}", "(2,0)"),
        ("{2}", "(2,1)"), ("{0,2}", "(2,1)"), ("{1,2}", "(2,1)"), ("{0,1,2}", "(2,1)")},
}


# Component at each point of the three-dimensional truncation, read off the drawings of M and N.
CUBE_TAGS_M = {
    "{}": "A0", "{0}": "B0", "{1}": "B0", "{2}": "B0",
    "{0,1}": "A0", "{0,2}": "A0", "{1,2}": "A0", "{0,1,2}": "B0",
    "(0,0)": "A1", "(0,1)": "B1", "(1,0)": "A2", "(1,1)": "B2", "(2,0)": "A3", "(2,1)": "B3",
}
CUBE_TAGS_N = {
    "{}": "B0", "{0}": "A0", "{1}": "A0", "{2}": "A0",
    "{0,1}": "B0", "{0,2}": "B0", "{1,2}": "B0", "{0,1,2}": "A0",
    "(0,0)": "A1", "(0,1)": "B1", "(1,0)": "A2", "(1,1)": "B2", "(2,0)": "A3", "(2,1)": "B3",
}
