/**
 * Reader for the simulator's experiment CSVs.
 *
 * The schema is fixed: a header row naming the nine columns below, comma
 * separators, decimal points, empty string for not-applicable numerics.
 * Parsing is strict — a missing column is reported by name so a schema
 * drift upstream fails loudly rather than plotting garbage.
 */

export const REQUIRED_COLUMNS = [
  "experiment",
  "strategy",
  "power_dbm",
  "draw",
  "capacity_bphz",
  "min_c",
  "max_c",
  "reliability",
  "est_error",
] as const;

export interface ResultRow {
  experiment: string;
  strategy: string;
  power_dbm: number;
  draw: number;
  capacity_bphz: number;
  min_c: number;
  max_c: number;
  reliability: number | null;
  est_error: number | null;
}

export class CsvSchemaError extends Error {}

function parseNumber(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw.trim() === "" || Number.isNaN(value)) {
    throw new CsvSchemaError(
      `line ${line}: column '${column}' has non-numeric value '${raw}'`,
    );
  }
  return value;
}

function parseOptional(raw: string, column: string, line: number): number | null {
  if (raw.trim() === "") return null;
  return parseNumber(raw, column, line);
}

/** Parse CSV text into typed rows, preserving row order exactly. */
export function parseResultsCsv(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvSchemaError("empty file: no header row");
  }
  const header = lines[0].split(",");
  for (const column of REQUIRED_COLUMNS) {
    if (!header.includes(column)) {
      throw new CsvSchemaError(`missing column '${column}' in header`);
    }
  }
  const index = new Map(header.map((name, i) => [name, i]));
  const rows: ResultRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== header.length) {
      throw new CsvSchemaError(
        `line ${i + 1}: expected ${header.length} fields, got ${fields.length}`,
      );
    }
    const get = (column: string) => fields[index.get(column)!];
    rows.push({
      experiment: get("experiment"),
      strategy: get("strategy"),
      power_dbm: parseNumber(get("power_dbm"), "power_dbm", i + 1),
      draw: parseNumber(get("draw"), "draw", i + 1),
      capacity_bphz: parseNumber(get("capacity_bphz"), "capacity_bphz", i + 1),
      min_c: parseNumber(get("min_c"), "min_c", i + 1),
      max_c: parseNumber(get("max_c"), "max_c", i + 1),
      reliability: parseOptional(get("reliability"), "reliability", i + 1),
      est_error: parseOptional(get("est_error"), "est_error", i + 1),
    });
  }
  if (rows.length === 0) {
    throw new CsvSchemaError("empty CSV body: nothing to plot");
  }
  return rows;
}
