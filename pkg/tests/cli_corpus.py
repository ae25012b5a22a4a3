"""Every CLI invocation exercised by the tests, with the expected exit status."""

from pathlib import Path

DATA = Path(__file__).parent / "data"


def d(name):
    return str(DATA / name)


CORPUS = [
    (["fix", d("one_twist.aut"), "-L", "6"], 0),
    (["fix", d("worked_pair.aut")], 0),
    (["fix", d("worked_pair.aut"), "--aut", "phi", "--format", "dot"], 0),
    (["intersect", d("worked_pair.aut"), "--of", "phi", "--of", "psi"], 0),
    (["intersect", d("subgroups.sub")], 0),
    (["intersect", d("subgroups.sub"), "--format", "dot"], 0),
    (["witness", d("worked_pair.aut")], 0),
    (["witness", d("worked_graph.graph"), "--graph", "R"], 0),
    (["witness", d("rank0.aut")], 0),
    (["witness", d("rank1.aut")], 0),
    (["witness", d("exponential.aut")], 3),
    (["witness", d("twists.graph")], 0),
    (["witness", d("quadratic.graph")], 0),
    (["verify", d("worked_pair.aut"), "--chi", "chi"], 0),
    (["verify", d("wrong_witness.aut"), "--chi", "chi"], 2),
    (["normalize", d("rose_pair.graph")], 0),
    (["normalize", d("two_vertex.graph")], 0),
    (["normalize", d("edge_slide.graph")], 0),
    (["normalize", d("quadratic.graph"), "--bound", "4"], 0),
    (["normalize", d("quadratic.graph"), "--bound", "3", "--strict"], 4),
    (["npaths", d("rose_pair.graph"), "--bound", "3"], 0),
    (["npaths", d("edge_slide.graph"), "--bound", "3", "--normalized"], 0),
    (["render", d("x_squared.sub"), "--sub", "S"], 0),
    (["render", d("two_vertex.graph"), "--graph", "T"], 0),
    (["render", d("one_twist.aut"), "--aut", "phi"], 0),
    (["fix", d("bad_syntax.aut")], 1),
    (["normalize", d("not_triangular.graph")], 1),
    (["fix", d("not_automorphism.aut")], 1),
    (["intersect", d("rank_mismatch.sub")], 1),
    (["fix", d("missing_file.aut")], 1),
]
