void f(int n, int x) {
    int i;
    for (i = 0; i < n; i = i + 2) {
        x = x + 1;
    }
}
