from pypegasus.theory import find_evading_union, measure, union_contains, union_from_index

points = [0.1, 0.35, 0.8]
union, index = find_evading_union(points)

print(union)  # exact rational endpoints
print(measure(union))  # 1/2, exactly
print([union_contains(union, p) for p in points])  # [False, False, False]

# Every union with rational endpoints has a natural-number index
assert union_from_index(index) == union
