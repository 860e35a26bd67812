import { existsSync, mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterEach, beforeAll, describe, expect, it, vi } from "vitest";
import { main } from "../src/cli.js";

let dir: string;

beforeAll(() => {
  dir = mkdtempSync(join(tmpdir(), "cli-"));
  writeFileSync(join(dir, "table.csv"),
    "value,scheme,sum_rate_bps_hz,error\n1,pdm,1.0,\n2,pdm,2.0,\n", "utf-8");
  writeFileSync(join(dir, "fig.toml"),
    'kind = "sweep-line"\ninput = "table.csv"\nout = "fig.svg"\n', "utf-8");
});

afterEach(() => {
  vi.restoreAllMocks();
});

describe("main", () => {
  it("renders a figure and reports the output path", () => {
    const log = vi.spyOn(console, "log").mockImplementation(() => {});
    expect(main(["render", "--spec", join(dir, "fig.toml")])).toBe(0);
    expect(existsSync(join(dir, "fig.svg"))).toBe(true);
    expect(log).toHaveBeenCalledWith(`wrote ${join(dir, "fig.svg")}`);
  });

  it("prints usage on unknown arguments", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["draw", "--spec", "x.toml"])).toBe(1);
    expect(main(["render"])).toBe(1);
    expect(err).toHaveBeenCalledWith("usage: capmimo-render render --spec <figure.toml>");
  });

  it("turns render failures into an error line and exit code 1", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["render", "--spec", join(dir, "absent.toml")])).toBe(1);
    const lines = err.mock.calls.map((c) => String(c[0]));
    expect(lines.some((l) => l.startsWith("error: could not read spec"))).toBe(true);
  });

  it("fails cleanly on a header-only input table", () => {
    writeFileSync(join(dir, "empty.csv"),
      "value,scheme,sum_rate_bps_hz,error\n", "utf-8");
    writeFileSync(join(dir, "empty.toml"),
      'kind = "sweep-line"\ninput = "empty.csv"\nout = "empty.svg"\n', "utf-8");
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["render", "--spec", join(dir, "empty.toml")])).toBe(1);
    const lines = err.mock.calls.map((c) => String(c[0]));
    expect(lines.some((l) => l.includes("no data rows"))).toBe(true);
    expect(existsSync(join(dir, "empty.svg"))).toBe(false);
  });
});
