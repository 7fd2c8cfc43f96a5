/** Types mirroring the server's GET /api/schema document. */

export interface ArgSpec {
  type: string;
  required: boolean;
}

export interface OperationSpec {
  args: Record<string, ArgSpec>;
  returns: string;
  /** null for scalar-returning operations (no selection set allowed). */
  fields: Record<string, string[] | null> | null;
}

export interface SchemaDocument {
  operations: Record<string, OperationSpec>;
  inputTypes: Record<string, Record<string, string>>;
}

export function operationNames(schema: SchemaDocument): string[] {
  return Object.keys(schema.operations);
}

export function isLeafOperation(spec: OperationSpec): boolean {
  return spec.fields === null;
}
