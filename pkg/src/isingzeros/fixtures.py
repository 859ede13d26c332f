"""Stored non-convex sphere meshes used by the sign search and perturbation scan.

Coordinates are literal so the fixtures do not depend on the random generator;
scripts/find_fixtures.py documents how they were found.
"""

from .mesh import EmbeddedMesh

# 6 vertices, 8 faces, 12 edges; exactly two concave edges
# regenerate: SamplerConfig(6, seed=1) then RescaleConfig((1.0, 4.0), seed=2)
SIX_VERTICES = (
    (0.6488532997276476, 1.542633186841166, 0.6204137577964003),
    (-1.4985065632421057, 1.041072923034126, 0.5132881974098855),
    (-2.121934100318726, 2.296465018558702, 1.4407187601413245),
    (0.6037987975674989, 0.05834552565862828, 1.122299126021884),
    (-2.303780910484489, -0.5096160574550066, -1.5081690613599954),
    (2.8574845482015054, 0.1895399953378225, -1.3955012643785962),
)
SIX_FACES = ((0, 5, 4), (0, 3, 5), (5, 3, 4), (0, 4, 1), (4, 3, 1), (0, 1, 2), (1, 3, 2), (3, 0, 2))

# 9 vertices, 14 faces, 21 edges; three concave edges
# regenerate: SamplerConfig(9, seed=0) then RescaleConfig((1.0, 4.0), seed=1)
NINE_VERTICES = (
    (0.4787391734541142, -0.5030117064247321, 2.4385180242924154),
    (0.6170473996182892, -3.150934457794784, 2.1269879805874425),
    (1.0621905134048046, 0.7714573463544406, -0.573236860086367),
    (-3.4486706316037368, -1.698618510561802, 0.11262626291561861),
    (-1.7001516315984402, -0.15998885196383592, -0.9110578461602081),
    (-1.7213612566324674, -1.2794047428813387, -0.7435355832039625),
    (1.2708528610384064, 3.2186171363701397, -0.39683315427445565),
    (1.9513715247910506, -0.9499280238807234, 0.5019722489770604),
    (2.0386982804883926, 0.2121406037324243, -1.6777207172800617),
)
NINE_FACES = ((4, 6, 2), (8, 4, 2), (0, 6, 3), (1, 0, 3), (6, 4, 3), (1, 3, 5), (3, 4, 5), (4, 8, 5), (0, 1, 7), (1, 5, 7), (2, 6, 7), (5, 8, 7), (6, 0, 7), (8, 2, 7))


def six_vertex_two_concave() -> EmbeddedMesh:
    return EmbeddedMesh(SIX_VERTICES, SIX_FACES, 0, "six-vertex-two-concave").validate()


def nine_vertex_nonconvex() -> EmbeddedMesh:
    return EmbeddedMesh(NINE_VERTICES, NINE_FACES, 0, "nine-vertex-nonconvex").validate()
