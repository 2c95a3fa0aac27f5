"""Compare d_theta on a branched a1 masure against the graph metric of its tree."""
import argparse
import itertools
import random
from fractions import Fraction as F

import networkx as nx

from masure.acceptance import tree_graph
from masure.masure_sim import make_config, random_masure
from masure.metrics import distance, theta
from masure.rootsys import preset


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--words", type=int, default=10)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--pairs", type=int, default=100)
    args = p.parse_args()
    real = preset("a1")
    rng = random.Random(args.seed)
    m = random_masure(make_config(real, 20, 2, 3), rng, n_words=args.words, depth=3, level_range=3)
    graph = tree_graph(m, args.radius)
    nodes = list(graph.nodes)
    pairs = list(itertools.combinations(nodes, 2))
    rng.shuffle(pairs)
    bad = 0
    for x, y in pairs[: args.pairs]:
        tree = F(nx.shortest_path_length(graph, x, y), 2)
        for sign in (1, -1):
            d = distance(m, x, y, theta(real, sign=sign))
            if d != tree:
                bad += 1
                print("mismatch", x, y, sign, d, tree)
    print(f"{len(nodes)} vertices, {min(args.pairs, len(pairs))} pairs, {bad} mismatches")


if __name__ == "__main__":
    main()
