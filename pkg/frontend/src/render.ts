/**
 * Shared rendering helpers.
 *
 * Every displayed statistic goes through stat(): the element's data-field
 * names the response field (dot path) and its data-value and text are
 * String(field) verbatim. Display-only shortening (the badge headline)
 * works on the verbatim string textually, never on the number.
 */

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Verbatim display element for one response field. */
export function stat(field: string, value: unknown, extraClass = ""): string {
  const verbatim = esc(String(value));
  const cls = extraClass ? `stat ${extraClass}` : "stat";
  return `<span class="${cls}" data-field="${esc(field)}" data-value="${verbatim}">${verbatim}</span>`;
}

/** Labeled row holding one stat. */
export function statRow(label: string, field: string, value: unknown): string {
  return `<div class="row"><span class="label">${esc(label)}</span>${stat(field, value)}</div>`;
}

/**
 * Textual truncation of a verbatim decimal string after `places` fraction
 * digits: "-0.10645..." becomes "-0.10". No rounding and no arithmetic, so
 * the headline can never disagree in sign or leading digits with the
 * verbatim value next to it. Exponent-form strings pass through unchanged.
 */
export function truncateDecimals(verbatim: string, places: number): string {
  if (/[eE]/.test(verbatim)) {
    return verbatim;
  }
  const dot = verbatim.indexOf(".");
  if (dot < 0) {
    return verbatim;
  }
  const digits = verbatim.slice(dot + 1, dot + 1 + places);
  return `${verbatim.slice(0, dot)}.${digits.padEnd(places, "0")}`;
}

export interface FieldError {
  code: string;
  message: string;
  field_path?: string;
}

/** Inline error marker placed at the offending field (or panel level). */
export function errorBox(error: FieldError): string {
  const at = error.field_path
    ? ` <code class="error-path" data-error-field="${esc(error.field_path)}">${esc(error.field_path)}</code>`
    : "";
  return (
    `<div class="error" data-error-code="${esc(error.code)}" data-value="${esc(error.message)}">` +
    `${esc(error.code)}:${at} ${esc(error.message)}</div>`
  );
}
