/**
 * DOM/canvas wiring: connects the stores, the API client, and the
 * toolbar. All commands are registered on a Dispatcher, so toolbar
 * buttons and keyboard shortcuts share the same handlers.
 */

import { ApiClient, ApiError } from "./api.js";
import type { DatasetSummary, StrokeDocument } from "./api.js";
import { Palette } from "./palette.js";
import type { Rgb } from "./palette.js";
import { applyMaskOpacity, traceToRgba } from "./overlay.js";
import { rasterFromStrokes } from "./rasterize.js";
import type { Stroke, Tool } from "./rasterize.js";
import { Dispatcher, KEYMAP } from "./shortcuts.js";
import type { ActionId } from "./shortcuts.js";
import { CanvasStore, WorkflowStore } from "./state.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export class App {
  private readonly api: ApiClient;
  private readonly workflow = new WorkflowStore();
  private readonly dispatcher = new Dispatcher();
  private palette = new Palette();
  private dataset: DatasetSummary | null = null;
  private imageBitmap: HTMLImageElement | null = null;
  private banner = "";
  private timer: number | undefined;

  private canvas!: HTMLCanvasElement;
  private ctx!: CanvasRenderingContext2D;

  constructor(base = "") {
    this.api = new ApiClient(base);
  }

  async start(): Promise<void> {
    this.canvas = el<HTMLCanvasElement>("canvas");
    const ctx = this.canvas.getContext("2d");
    if (!ctx) throw new Error("2d canvas not supported");
    this.ctx = ctx;
    this.bindToolbar();
    this.bindPointer();
    this.bindKeyboard();
    await this.populateDatasets();
    this.timer = window.setInterval(() => this.renderStatus(), 500);
    this.render();
  }

  stop(): void {
    if (this.timer !== undefined) window.clearInterval(this.timer);
  }

  private get canvasStore(): CanvasStore | null {
    const id = this.workflow.activeImageId;
    return id ? this.workflow.canvasFor(id) : null;
  }

  // ---- session lifecycle ----------------------------------------------

  private async populateDatasets(): Promise<void> {
    const select = el<HTMLSelectElement>("dataset-select");
    const { datasets } = await this.api.listDatasets();
    select.innerHTML = "";
    for (const ds of datasets) {
      const option = document.createElement("option");
      option.value = ds.dataset_id;
      option.textContent = `${ds.dataset_id} (${ds.image_count} images)`;
      select.appendChild(option);
    }
  }

  private async startSession(): Promise<void> {
    const select = el<HTMLSelectElement>("dataset-select");
    const user = el<HTMLInputElement>("user-id").value.trim() || "anonymous";
    try {
      const { datasets } = await this.api.listDatasets();
      this.dataset = datasets.find((d) => d.dataset_id === select.value) ?? null;
      if (this.dataset) {
        const colors = this.dataset.categories.map((c) => c.color as Rgb);
        this.palette = new Palette(colors);
      }
      const view = await this.api.createSession(user, select.value);
      this.workflow.applySession(view);
      this.workflow.screen = "annotate";
      this.banner = "";
      this.populateCategories();
      await this.loadActiveImage();
    } catch (err) {
      this.banner = err instanceof ApiError ? err.message : String(err);
    }
    this.render();
  }

  private populateCategories(): void {
    const select = el<HTMLSelectElement>("category-select");
    select.innerHTML = "";
    const categories = this.dataset?.categories ?? [
      { id: 0, name: "background", color: [0, 0, 0] as Rgb },
      { id: 1, name: "object", color: [128, 0, 0] as Rgb },
    ];
    for (const cat of categories) {
      const option = document.createElement("option");
      option.value = String(cat.id);
      option.textContent = `${cat.id}: ${cat.name}`;
      select.appendChild(option);
    }
    select.onchange = () => {
      this.canvasStore?.setCategory(Number(select.value));
    };
  }

  private async loadActiveImage(): Promise<void> {
    const id = this.workflow.activeImageId;
    if (!id) return;
    const image = new Image();
    const loaded = new Promise<void>((resolve, reject) => {
      image.onload = () => resolve();
      image.onerror = () => reject(new Error(`failed to load image ${id}`));
    });
    image.src = this.api.imageUrl(id, this.workflow.session?.dataset_id);
    await loaded;
    this.imageBitmap = image;
    this.canvas.width = image.naturalWidth;
    this.canvas.height = image.naturalHeight;
    this.render();
  }

  private activeImageSize(): { width: number; height: number } | null {
    const id = this.workflow.activeImageId;
    const info = this.workflow.session?.images.find((i) => i.image_id === id);
    return info ? { width: info.width, height: info.height } : null;
  }

  // ---- commands --------------------------------------------------------

  private bindToolbar(): void {
    const actions: [string, ActionId][] = [
      ["btn-pencil", "tool:pencil"],
      ["btn-line", "tool:line"],
      ["btn-eraser", "tool:eraser"],
      ["btn-t1", "thickness:1"],
      ["btn-t2", "thickness:2"],
      ["btn-t4", "thickness:4"],
      ["btn-t8", "thickness:8"],
      ["btn-trace", "toggle:trace"],
      ["btn-mask", "toggle:mask"],
      ["btn-zoom-in", "zoom:in"],
      ["btn-zoom-out", "zoom:out"],
      ["btn-refine", "refine"],
      ["btn-submit", "submit"],
      ["btn-next", "image:next"],
      ["btn-prev", "image:prev"],
    ];
    const register = (id: ActionId, handler: () => void) => {
      this.dispatcher.register(id, handler);
    };
    register("tool:pencil", () => this.setTool("pencil"));
    register("tool:line", () => this.setTool("line"));
    register("tool:eraser", () => this.setTool("eraser"));
    register("thickness:1", () => this.canvasStore?.setThickness(1));
    register("thickness:2", () => this.canvasStore?.setThickness(2));
    register("thickness:4", () => this.canvasStore?.setThickness(4));
    register("thickness:8", () => this.canvasStore?.setThickness(8));
    register("toggle:trace", () => {
      this.canvasStore?.toggleTrace();
      this.render();
    });
    register("toggle:mask", () => {
      this.canvasStore?.toggleMask();
      this.render();
    });
    register("zoom:in", () => this.zoom(1.25));
    register("zoom:out", () => this.zoom(1 / 1.25));
    register("refine", () => void this.requestRefine());
    register("submit", () => void this.submitBatch());
    register("image:next", () => this.cycleImage(1));
    register("image:prev", () => this.cycleImage(-1));
    register("category:next", () => this.cycleCategory(1));
    register("category:prev", () => this.cycleCategory(-1));

    for (const [domId, actionId] of actions) {
      el<HTMLButtonElement>(domId).addEventListener("click", () =>
        this.dispatcher.dispatch(actionId),
      );
    }
    el<HTMLButtonElement>("btn-start").addEventListener("click", () =>
      void this.startSession(),
    );
    el<HTMLInputElement>("image-opacity").addEventListener("input", (event) => {
      const value = Number((event.target as HTMLInputElement).value) / 100;
      this.canvasStore?.setImageOpacity(value);
      this.render();
    });
    el<HTMLInputElement>("mask-opacity").addEventListener("input", (event) => {
      const value = Number((event.target as HTMLInputElement).value) / 100;
      this.canvasStore?.setMaskOpacity(value);
      this.render();
    });
  }

  private setTool(tool: Tool): void {
    this.canvasStore?.setTool(tool);
    this.renderStatus();
  }

  private zoom(factor: number): void {
    this.canvasStore?.zoomAt(factor, this.canvas.width / 2, this.canvas.height / 2);
    this.render();
  }

  private cycleImage(step: number): void {
    const ids = this.workflow.batchImageIds();
    if (!ids.length) return;
    const index = Math.max(0, ids.indexOf(this.workflow.activeImageId ?? ids[0]));
    this.workflow.activeImageId = ids[(index + step + ids.length) % ids.length];
    void this.loadActiveImage();
  }

  private cycleCategory(step: number): void {
    const store = this.canvasStore;
    const count = this.dataset?.categories.length ?? 2;
    if (!store) return;
    store.setCategory((store.category + step + count) % count);
    const select = el<HTMLSelectElement>("category-select");
    select.value = String(store.category);
  }

  // ---- pointer ---------------------------------------------------------

  private bindPointer(): void {
    const position = (event: MouseEvent) => {
      const rect = this.canvas.getBoundingClientRect();
      return { cx: event.clientX - rect.left, cy: event.clientY - rect.top };
    };
    this.canvas.addEventListener("mousedown", (event) => {
      const store = this.canvasStore;
      if (!store || event.button !== 0) return;
      const { cx, cy } = position(event);
      store.pointerDown(cx, cy);
      this.render();
    });
    window.addEventListener("mousemove", (event) => {
      const store = this.canvasStore;
      if (!store || !store.pending) return;
      const { cx, cy } = position(event);
      store.pointerMove(cx, cy);
      this.render();
    });
    window.addEventListener("mouseup", (event) => {
      const store = this.canvasStore;
      if (!store || !store.pending) return;
      const { cx, cy } = position(event);
      store.pointerUp(cx, cy);
      this.render();
    });
    this.canvas.addEventListener("wheel", (event) => {
      event.preventDefault();
      const { cx, cy } = position(event);
      this.canvasStore?.zoomAt(event.deltaY < 0 ? 1.25 : 1 / 1.25, cx, cy);
      this.render();
    });
  }

  private bindKeyboard(): void {
    document.addEventListener("keydown", (event) => {
      const target = event.target as HTMLElement | null;
      if (target && (target.tagName === "INPUT" || target.tagName === "SELECT")) {
        return;
      }
      if (event.key in KEYMAP && this.dispatcher.handleKey(event.key)) {
        event.preventDefault();
      }
    });
  }

  // ---- server actions --------------------------------------------------

  private strokeDocument(store: CanvasStore): StrokeDocument | null {
    const size = this.activeImageSize();
    if (!size) return null;
    return {
      version: 1,
      width: size.width,
      height: size.height,
      strokes: store.strokes.map((s: Stroke) => ({
        tool: s.tool,
        category: s.category,
        thickness: s.thickness,
        points: s.points,
      })),
    };
  }

  private async requestRefine(): Promise<void> {
    const session = this.workflow.session;
    const imageId = this.workflow.activeImageId;
    const store = this.canvasStore;
    if (!session || !imageId || !store) return;
    if (store.strokes.length === 0) {
      this.banner = "draw at least one stroke before refining";
      this.render();
      return;
    }
    if (!this.workflow.beginRefine()) return;
    el<HTMLButtonElement>("btn-refine").disabled = true;
    try {
      const doc = this.strokeDocument(store);
      if (!doc) return;
      await this.api.putTrace(session.session_id, imageId, doc);
      const response = await this.api.refine(session.session_id, imageId);
      await this.adoptMask(imageId, response.mask_png_base64);
      this.workflow.applySession(await this.api.getSession(session.session_id));
      this.banner = "";
    } catch (err) {
      // stroke buffer is retained so the user can retry
      this.banner = err instanceof ApiError ? err.message : String(err);
    } finally {
      this.workflow.endRefine();
      el<HTMLButtonElement>("btn-refine").disabled = false;
      this.render();
    }
  }

  private async adoptMask(imageId: string, pngBase64: string): Promise<void> {
    const size = this.activeImageSize();
    if (!size) return;
    const image = new Image();
    const loaded = new Promise<void>((resolve, reject) => {
      image.onload = () => resolve();
      image.onerror = () => reject(new Error("mask decode failed"));
    });
    image.src = `data:image/png;base64,${pngBase64}`;
    await loaded;
    const scratch = document.createElement("canvas");
    scratch.width = size.width;
    scratch.height = size.height;
    const ctx = scratch.getContext("2d");
    if (!ctx) return;
    ctx.drawImage(image, 0, 0);
    const rgba = ctx.getImageData(0, 0, size.width, size.height);
    this.workflow.lastMaskRgba.set(
      imageId,
      new Uint8ClampedArray(rgba.data.buffer.slice(0)),
    );
  }

  private async submitBatch(): Promise<void> {
    const session = this.workflow.session;
    if (!session) return;
    const unfinished = this.workflow.unfinishedImageIds();
    if (unfinished.length) {
      this.banner = `refine these images first: ${unfinished.join(", ")}`;
      this.render();
      return;
    }
    try {
      const result = await this.api.submit(session.session_id);
      this.workflow.applySubmit(result);
      this.banner = "";
      if (!result.passed) {
        await this.loadActiveImage();
      }
    } catch (err) {
      this.banner = err instanceof ApiError ? err.message : String(err);
    }
    this.render();
  }

  // ---- rendering -------------------------------------------------------

  private render(): void {
    this.renderCanvas();
    this.renderStatus();
    this.renderScreens();
  }

  private renderCanvas(): void {
    const store = this.canvasStore;
    const size = this.activeImageSize();
    if (!store || !size || !this.imageBitmap) return;
    const { ctx } = this;
    ctx.setTransform(1, 0, 0, 1, 0, 0);
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    ctx.imageSmoothingEnabled = false;
    ctx.setTransform(store.view.zoom, 0, 0, store.view.zoom, store.view.panX, store.view.panY);

    ctx.globalAlpha = store.imageOpacity;
    ctx.drawImage(this.imageBitmap, 0, 0);
    ctx.globalAlpha = 1;

    const imageId = this.workflow.activeImageId;
    if (imageId && store.maskVisible) {
      const rgba = this.workflow.lastMaskRgba.get(imageId);
      if (rgba) {
        const layer = applyMaskOpacity(rgba, store.maskOpacity);
        ctx.drawImage(this.toCanvas(layer, size.width, size.height), 0, 0);
      }
    }
    if (store.traceVisible) {
      const strokes = store.pending
        ? [...store.strokes, { ...store.pending, points: [...store.pending.points] }]
        : store.strokes;
      const raster = rasterFromStrokes(size.width, size.height, strokes as Stroke[]);
      const layer = traceToRgba(raster, this.palette, 0.9);
      ctx.drawImage(this.toCanvas(layer, size.width, size.height), 0, 0);
    }
  }

  private toCanvas(rgba: Uint8ClampedArray, width: number, height: number): HTMLCanvasElement {
    const scratch = document.createElement("canvas");
    scratch.width = width;
    scratch.height = height;
    const ctx = scratch.getContext("2d");
    if (ctx) {
      const data = ctx.createImageData(width, height);
      data.data.set(rgba);
      ctx.putImageData(data, 0, 0);
    }
    return scratch;
  }

  private renderStatus(): void {
    const store = this.canvasStore;
    const status = el<HTMLElement>("status");
    const bannerNode = el<HTMLElement>("banner");
    bannerNode.textContent = this.banner;
    bannerNode.style.display = this.banner ? "block" : "none";
    if (!store || !this.workflow.session) {
      status.textContent = "no session";
      return;
    }
    const id = this.workflow.activeImageId;
    const seconds = store.elapsedSeconds().toFixed(0);
    status.textContent =
      `${id} | tool ${store.tool} ${store.thickness}px cat ${store.category} ` +
      `| zoom ${store.view.zoom.toFixed(2)} | ${seconds}s | ` +
      `attempt ${this.workflow.session.attempt}`;
  }

  private renderScreens(): void {
    const score = el<HTMLElement>("score-screen");
    const redo = el<HTMLElement>("redo-screen");
    score.style.display = this.workflow.screen === "score" ? "block" : "none";
    redo.style.display = this.workflow.screen === "redo" ? "block" : "none";
    if (this.workflow.screen === "score") {
      const rows = this.workflow.lastScores
        .map(
          (s) =>
            `<tr><td>${s.base_score}</td><td>${s.bonus.toFixed(2)}x</td>` +
            `<td>${s.final_score}</td></tr>`,
        )
        .join("");
      el<HTMLElement>("score-table-body").innerHTML = rows;
    }
  }
}
