/**
 * Test-side helpers for inspecting rendered markup without a DOM:
 * extract the (data-field, data-value) pairs the panels stamp on every
 * displayed statistic, and resolve dot paths into parsed response bodies.
 */

export interface StatPair {
  field: string;
  value: string;
}

function unescapeHtml(text: string): string {
  return text
    .replace(/&quot;/g, '"')
    .replace(/&gt;/g, ">")
    .replace(/&lt;/g, "<")
    .replace(/&amp;/g, "&");
}

export function extractStats(html: string): StatPair[] {
  const pairs: StatPair[] = [];
  const pattern = /data-field="([^"]*)" data-value="([^"]*)"/g;
  for (const match of html.matchAll(pattern)) {
    pairs.push({ field: unescapeHtml(match[1]), value: unescapeHtml(match[2]) });
  }
  return pairs;
}

export function extractAttr(html: string, attr: string): string[] {
  const values: string[] = [];
  const pattern = new RegExp(`${attr}="([^"]*)"`, "g");
  for (const match of html.matchAll(pattern)) {
    values.push(unescapeHtml(match[1]));
  }
  return values;
}

/** Resolve "confident_efficacy.value" or "rows.3.mean_y" into a body. */
export function resolvePath(body: unknown, path: string): unknown {
  let current: unknown = body;
  for (const part of path.split(".")) {
    if (current === null || current === undefined) {
      return undefined;
    }
    current = (current as Record<string, unknown>)[
      Array.isArray(current) ? (Number(part) as unknown as string) : part
    ];
  }
  return current;
}
