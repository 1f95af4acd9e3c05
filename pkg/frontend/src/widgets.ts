// Adjustment builders with the client-side validation the widgets rely on.
// Each function returns the exact JSON posted to /sessions/{id}/adjust.

import type { Adjustment } from "./types.js";

export function resolveAmbiguity(token: string, field: string): Adjustment {
  return { kind: "ResolveAmbiguity", token, field };
}

export function changeMark(mark: string): Adjustment {
  return { kind: "ChangeMark", mark };
}

export function removeAttribute(field: string): Adjustment {
  return { kind: "RemoveAttribute", field };
}

export function addAttribute(field: string): Adjustment {
  return { kind: "AddAttribute", field };
}

export function changeAggregate(channel: string, aggFn: string): Adjustment {
  return { kind: "ChangeAggregate", channel, aggFn };
}

export function removeFilter(index: number): Adjustment {
  return { kind: "RemoveFilter", index };
}

export function operandArity(operator: string): number {
  return operator === "between" ? 2 : 1;
}

/**
 * Parse the filter-editor operand field. Values are comma-separated for
 * "between"; numeric text becomes numbers. Returns null when the input is
 * empty or has the wrong arity, which blocks the widget submit.
 */
export function parseOperands(operator: string, raw: string): unknown[] | null {
  const parts = raw
    .split(",")
    .map((p) => p.trim())
    .filter((p) => p.length > 0);
  if (parts.length !== operandArity(operator)) {
    return null;
  }
  return parts.map((part) => {
    const numeric = Number(part.replace(/,/g, ""));
    return Number.isFinite(numeric) && part !== "" ? numeric : part;
  });
}

export function modifyFilter(
  index: number,
  operator: string,
  rawOperands: string,
): Adjustment | null {
  const operands = parseOperands(operator, rawOperands);
  if (operands === null) return null;
  return { kind: "ModifyFilter", index, operator, operands };
}

export function addFilter(
  field: string,
  operator: string,
  rawOperands: string,
): Adjustment | null {
  const operands = parseOperands(operator, rawOperands);
  if (operands === null) return null;
  return { kind: "AddFilter", field, operator, operands };
}
