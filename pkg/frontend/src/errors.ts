/** Input problems the caller can fix: bad spec files, missing columns, no data. */
export class RenderError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "RenderError";
  }
}
