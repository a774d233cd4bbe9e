export class UnreadableVideo extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'UnreadableVideo';
  }
}

export class EstimatorUnavailable extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'EstimatorUnavailable';
  }
}
