/**
 * Prompt templates for attribute generation and zero-shot classification.
 *
 * The attribute query is a two-turn Q/A whose answer turn ends with a bare
 * "-" so the model continues the bullet list. Two fixed few-shot examples
 * (our own, not from any external source) precede the target turns for more
 * consistent list-shaped output. The classifier template joins class name
 * and attribute with a connector filling the is/has/etc slot.
 */

export interface FewShotExample {
  className: string;
  attributes: string[];
}

export const DEFAULT_FEW_SHOT: FewShotExample[] = [
  {
    className: "red fox",
    attributes: [
      "reddish-orange fur",
      "a white-tipped bushy tail",
      "pointed black-backed ears",
    ],
  },
  {
    className: "school bus",
    attributes: [
      "a long yellow body",
      "black lettering along the side",
      "a hinged stop sign near the driver door",
    ],
  },
];

function queryTurns(className: string): string {
  return (
    `Q: What are useful features for distinguishing a ${className} in a photo?\n` +
    `A: There are several useful visual features to tell there is a ${className} in a photo:\n` +
    `-`
  );
}

export function renderAttributeQuery(
  className: string,
  fewShot: FewShotExample[] = DEFAULT_FEW_SHOT,
): string {
  const blocks = fewShot.map(
    (ex) => queryTurns(ex.className) + " " + ex.attributes.join("\n- "),
  );
  blocks.push(queryTurns(className));
  return blocks.join("\n\n");
}

/** "A photo of a {class name}, which {connector} {attribute}". */
export function renderClassifierPrompt(
  className: string,
  attribute: string,
  connector: string = "has",
): string {
  return `A photo of a ${className}, which ${connector} ${attribute}`;
}
