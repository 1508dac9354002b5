void f(int n, int x, int y) {
    for (int i = 0; i < n; i++) {
        if (x > 0) {
            y = y + x;
        } else {
            y = y - 1;
        }
    }
}
