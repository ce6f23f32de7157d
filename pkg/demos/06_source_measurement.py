"""Measuring size and complexity straight from source files.

The scanner handles brace languages (Java, C, C#) without a grammar:
strip comments and literal contents, find methods as name(...){ inside a
type body, then count decision points per method.
"""

import tempfile
from pathlib import Path

import inquest as iq

for unit_id, m in iq.extract_tree(iq.snippets_dir()):
    print(f"{unit_id}: {m.loc} loc, {m.method_count} methods")
    for method in m.methods:
        print(
            f"  {method.name}: lines {method.start_line}-{method.end_line}, "
            f"length {method.length}, cyclomatic {method.cyclomatic}"
        )

# operators hidden in strings or comments never count
tricky = '''
class Demo {
    String pick(int n) {
        String s = "a && b ? c : d";   // looks branchy, is data
        return n > 0 ? s : "";         // the only real decision
    }
}
'''
m = iq.extract_source(tricky)
print(f"\ntricky snippet: cyclomatic {m.methods[0].cyclomatic} (expected 2)")

# extracted numbers feed straight into a product-metrics CSV
with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "run_1.product.csv"
    iq.write_product_csv(iq.extract_tree(iq.snippets_dir()), out, aggregate="max")
    print(f"\n{out.name}:")
    print(out.read_text())
