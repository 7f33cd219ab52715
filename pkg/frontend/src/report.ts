/**
 * JSON walker that preserves the exact source text of every primitive.
 *
 * The report table must show numbers byte-equivalently to GET /report; the
 * server's serialization (e.g. "1e-06") does not survive a JSON.parse /
 * re-stringify round trip in JavaScript, so table cells are taken from the
 * raw literals instead of re-serialized values.
 */

export type RawLiterals = Map<string, string>;

export function parseRawLiterals(text: string): RawLiterals {
  const out: RawLiterals = new Map();
  let pos = 0;

  function ws() {
    while (pos < text.length && /[\s]/.test(text[pos])) pos++;
  }

  function fail(what: string): never {
    throw new Error(`malformed JSON near ${pos}: expected ${what}`);
  }

  function parseString(): string {
    if (text[pos] !== '"') fail("string");
    let end = pos + 1;
    while (end < text.length && text[end] !== '"') {
      if (text[end] === "\\") end++;
      end++;
    }
    const raw = text.slice(pos, end + 1);
    pos = end + 1;
    return JSON.parse(raw) as string;
  }

  function parseValue(path: string) {
    ws();
    const ch = text[pos];
    if (ch === "{") {
      pos++;
      ws();
      if (text[pos] === "}") {
        pos++;
        return;
      }
      for (;;) {
        ws();
        const key = parseString();
        ws();
        if (text[pos] !== ":") fail(":");
        pos++;
        parseValue(path ? `${path}.${key}` : key);
        ws();
        if (text[pos] === ",") {
          pos++;
          continue;
        }
        if (text[pos] === "}") {
          pos++;
          return;
        }
        fail(", or }");
      }
    }
    if (ch === "[") {
      pos++;
      ws();
      if (text[pos] === "]") {
        pos++;
        return;
      }
      let i = 0;
      for (;;) {
        parseValue(`${path}[${i}]`);
        i++;
        ws();
        if (text[pos] === ",") {
          pos++;
          continue;
        }
        if (text[pos] === "]") {
          pos++;
          return;
        }
        fail(", or ]");
      }
    }
    if (ch === '"') {
      const start = pos;
      parseString();
      out.set(path, text.slice(start, pos));
      return;
    }
    const m = /^(-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|true|false|null)/.exec(text.slice(pos));
    if (!m) fail("a JSON value");
    out.set(path, m[1]);
    pos += m[1].length;
  }

  parseValue("");
  ws();
  if (pos !== text.length) fail("end of input");
  return out;
}

/** Raw literal at a dotted path, or "" when the path is absent. */
export function rawAt(literals: RawLiterals, path: string): string {
  return literals.get(path) ?? "";
}
