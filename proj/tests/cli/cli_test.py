"""End-to-end checks of the lwpr command-line tool. Usage: cli_test.py <path-to-lwpr>"""
import json
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

LWPR = None


def run(*args, cwd):
    return subprocess.run([LWPR, *map(str, args)], cwd=cwd, capture_output=True, text=True)


class Cli(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def test_generate_writes_edges_and_metadata(self):
        r = run("generate", "--model", "dpa", "--n", 1000, "--m", 2, "--delta", 1, "--seed", 7, cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        lines = (self.dir / "graph.txt").read_text().splitlines()
        self.assertEqual(lines[0], "# n=1000")
        meta = json.loads((self.dir / "graph.json").read_text())
        self.assertEqual(meta["seed"], 7)
        self.assertEqual(meta["degrees"]["edges"], 2 * 999)
        again = run("generate", "--model", "dpa", "--n", 1000, "--m", 2, "--delta", 1, "--seed", 7,
                    "--out", "b.txt", cwd=self.dir)
        self.assertEqual(again.returncode, 0)
        self.assertEqual((self.dir / "b.txt").read_text(), (self.dir / "graph.txt").read_text())

    def test_pagerank_reports_gap_and_bound(self):
        (self.dir / "g.txt").write_text("0 1\n1 2\n2 0\n")
        r = run("pagerank", "--graph", "g.txt", "--c", 0.85, "--N", 20, "--out", "s.csv", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        meta = json.loads((self.dir / "s.json").read_text())
        self.assertAlmostEqual(meta["bound"], 0.85 ** 21, places=14)
        self.assertTrue(0 <= meta["mean_gap"] <= meta["bound"] + 1e-10)
        rows = (self.dir / "s.csv").read_text().splitlines()
        self.assertEqual(rows[0], "vertex,R,R_N")
        self.assertAlmostEqual(float(rows[1].split(",")[1]), 1.0, places=10)

    def test_bad_graph_names_the_line(self):
        (self.dir / "g.txt").write_text("0 1\n1 x\n")
        r = run("pagerank", "--graph", "g.txt", cwd=self.dir)
        self.assertEqual(r.returncode, 1)
        self.assertIn("g.txt:2", r.stderr)

    def test_compare_prints_ks(self):
        (self.dir / "a.csv").write_text("R\n1\n2\n3\n4\n")
        (self.dir / "b.csv").write_text("R\n1\n2\n3\n10\n")
        r = run("compare", "--graph-tails", "a.csv", "--limit-tails", "b.csv", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertAlmostEqual(float(r.stdout), 0.25)

    def test_census_and_tv(self):
        (self.dir / "g.txt").write_text("0 1\n1 2\n2 0\n")
        self.assertEqual(run("census", "--graph", "g.txt", "--k", 1, "--out", "c.csv", cwd=self.dir).returncode, 0)
        rows = (self.dir / "c.csv").read_text().splitlines()
        self.assertEqual(rows[0], "code_hex,count")
        self.assertEqual(len(rows), 2)
        self.assertTrue(rows[1].endswith(",3"))
        r = run("compare", "--census-a", "c.csv", "--census-b", "c.csv", "--k", 1, cwd=self.dir)
        self.assertEqual(float(r.stdout), 0.0)

    def test_limit_sample(self):
        r = run("limit-sample", "--model", "ctbp", "--theta", 1, "--M", 2000, "--N", 5, "--c", 0.5, cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        meta = json.loads((self.dir / "limit_pool.json").read_text())
        self.assertAlmostEqual(meta["alpha_star"], 2.0, places=9)
        values = (self.dir / "limit_pool.csv").read_text().splitlines()[1:]
        self.assertEqual(len(values), 2000)
        self.assertEqual(run("limit-sample", "--model", "polya", "--m", 1, cwd=self.dir).returncode, 1)

    def test_verify_passes_on_generated_graph(self):
        run("generate", "--model", "dcm", "--law", "1:2:0.5,2:1:0.5", "--n", 500, cwd=self.dir)
        r = run("verify", "--graph", "graph.txt", "--N", 10, cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stdout + r.stderr)
        self.assertNotIn("FAIL", r.stdout)

    def write_config(self, **overrides):
        cfg = {"model": {"name": "dcm", "law": "1:1:0.2,2:2:0.3,1:3:0.25,3:1:0.25"},
               "pagerank": {"c": 0.5, "N": 10}, "sizes": [300, 1000], "limit": {"M": 3000},
               "comparison": {"census_depths": [1, 2]}, "seed": 5}
        for key, value in overrides.items():
            cfg[key] = value
        (self.dir / "cfg.json").write_text(json.dumps(cfg))

    def test_run_layout_and_determinism(self):
        self.write_config()
        for out in ("o1", "o2"):
            r = run("run", "--config", "cfg.json", "--out", out, cwd=self.dir)
            self.assertEqual(r.returncode, 0, r.stderr)
        names = sorted(p.name for p in (self.dir / "o1").iterdir())
        for expected in ("config.json", "graph_300.txt", "graph_1000.txt", "scores_300.csv", "scores_1000.csv",
                         "census_300_1.csv", "census_1000_2.csv", "limit_pool.csv", "record.json"):
            self.assertIn(expected, names)
        for name in names:
            if name.endswith((".csv", ".txt")):
                self.assertEqual((self.dir / "o1" / name).read_bytes(), (self.dir / "o2" / name).read_bytes(), name)
        record = json.loads((self.dir / "o1" / "record.json").read_text())
        self.assertEqual(record["status"], "ok")
        self.assertTrue(all(i["ok"] for i in record["invariants"]))
        self.assertIn("ks_to_limit", record["sizes"][0])

    def test_cycle_union_config(self):
        self.write_config(model={"name": "dcm", "law": "1:1:1"})
        r = run("run", "--config", "cfg.json", "--out", "o", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        record = json.loads((self.dir / "o" / "record.json").read_text())
        for size in record["sizes"]:
            self.assertAlmostEqual(size["mean_R"], 1.0, places=10)
            self.assertIn("ks_to_limit", size)

    def test_ctbp_records_alpha(self):
        self.write_config(model={"name": "ctbp", "theta": 1.0})
        r = run("run", "--config", "cfg.json", "--out", "o", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        record = json.loads((self.dir / "o" / "record.json").read_text())
        self.assertAlmostEqual(record["limit"]["alpha_star"], 2.0, places=9)

    def test_malformed_config_names_the_field(self):
        self.write_config(pagerank={"c": 1.2, "N": 10})
        r = run("run", "--config", "cfg.json", "--out", "o", cwd=self.dir)
        self.assertEqual(r.returncode, 1)
        self.assertIn("pagerank.c", r.stderr)
        self.write_config(limit={"M": 10, "depht": 3})
        r = run("run", "--config", "cfg.json", "--out", "o", cwd=self.dir)
        self.assertEqual(r.returncode, 1)
        self.assertIn("limit.depht", r.stderr)

    def test_stage_failure_leaves_marker(self):
        # depth-12 neighborhoods of a 3-regular graph overflow the canonizer
        self.write_config(model={"name": "dcm", "law": "3:3:1"}, comparison={"census_depths": [12]})
        r = run("run", "--config", "cfg.json", "--out", "o", cwd=self.dir)
        self.assertEqual(r.returncode, 1)
        self.assertIn("stage limit", r.stderr)
        self.assertTrue((self.dir / "o" / "FAILED").exists())
        record = json.loads((self.dir / "o" / "record.json").read_text())
        self.assertEqual(record["status"], "failed")


if __name__ == "__main__":
    LWPR = sys.argv.pop(1)
    unittest.main()
