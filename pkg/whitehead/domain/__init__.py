"""
Combinatorial core: graphs, based partitions, the Whitehead poset and
essential vertex types.
"""
