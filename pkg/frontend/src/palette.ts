/** Category colors: the same bit-reversal colormap the server ships. */

export type Rgb = [number, number, number];

export const VOID_COLOR: Rgb = [224, 224, 192];
export const BACKGROUND_COLOR: Rgb = [0, 0, 0];

export function colormap(n = 256): Rgb[] {
  const table: Rgb[] = [];
  for (let i = 0; i < n; i++) {
    let r = 0;
    let g = 0;
    let b = 0;
    let value = i;
    for (let j = 0; j < 8; j++) {
      r |= ((value >> 0) & 1) << (7 - j);
      g |= ((value >> 1) & 1) << (7 - j);
      b |= ((value >> 2) & 1) << (7 - j);
      value >>= 3;
    }
    table.push([r, g, b]);
  }
  return table;
}

export class Palette {
  readonly table: Rgb[];

  constructor(customColors?: Rgb[]) {
    this.table = colormap(256);
    this.table[255] = VOID_COLOR;
    if (customColors) {
      customColors.forEach((color, i) => {
        this.table[i] = color;
      });
    }
  }

  colorOf(category: number): Rgb {
    return this.table[category];
  }

  cssColorOf(category: number): string {
    const [r, g, b] = this.table[category];
    return `rgb(${r}, ${g}, ${b})`;
  }
}
